use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use one21::builders::approx_capacity;
use one21::montecarlo::{run_trials_sequential, TrialConfig};
use one21::topology::{generate_random, CapacityDist, TopologySpec};

fn sweep_config() -> TrialConfig {
    TrialConfig {
        n_relays: 10,
        trials: 32,
        theta: 0.2,
        cap_mean: 1.0,
        cap_variance: 0.1,
        topology: TopologySpec::Layered {
            layers: 2,
            edge_prob: 0.5,
        },
        seed: 7,
    }
}

fn montecarlo_benches(c: &mut Criterion) {
    let cfg = sweep_config();
    c.bench_function("montecarlo/sequential/n10x32", |b| {
        b.iter(|| run_trials_sequential(black_box(&cfg)).unwrap())
    });
    #[cfg(feature = "parallel")]
    c.bench_function("montecarlo/parallel/n10x32", |b| {
        use one21::montecarlo::run_trials_parallel;
        b.iter(|| run_trials_parallel(black_box(&cfg)).unwrap())
    });
}

fn solver_benches(c: &mut Criterion) {
    let dist = CapacityDist::new(1.0, 0.1).unwrap();
    let net = generate_random(
        10,
        1,
        &TopologySpec::Layered {
            layers: 2,
            edge_prob: 0.5,
        },
        &dist,
        7,
    )
    .unwrap();
    c.bench_function("solve/p2_unconstrained_n10", |b| {
        b.iter(|| approx_capacity(black_box(&net)).unwrap())
    });
}

criterion_group!(benches, montecarlo_benches, solver_benches);
criterion_main!(benches);
