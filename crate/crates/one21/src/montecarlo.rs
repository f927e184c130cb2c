//! Seeded Monte-Carlo sweeps over random networks.
//!
//! The topology is generated once from the seed; each trial redraws the
//! link capacities on an independent RNG stream, solves the capacity
//! LPs with and without thresholds, and counts the edge-disjoint paths
//! the thresholded optimum activates. Records always come back in trial
//! order, and a `(seed, trial_id)` pair fully reproduces a trial.
//!
//! With the `parallel` feature (default) trials run on the rayon pool;
//! [`run_trials_sequential`] is always available and produces the same
//! records.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::builders::{approx_capacity, passive_capacity, SolveError};
use crate::disjoint::active_edge_disjoint;
use crate::model::{Network, ThresholdError, ThresholdMap};
use crate::topology::{draw_capacities, generate_topology, CapacityDist, GenerateError, TopologySpec};

/// One sweep configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub n_relays: usize,
    pub trials: usize,
    pub theta: f64,
    pub cap_mean: f64,
    pub cap_variance: f64,
    pub topology: TopologySpec,
    pub seed: u64,
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_id: usize,
    /// Master seed of the sweep; `(seed, trial_id)` reproduces the trial.
    pub seed: u64,
    pub approx_capacity: f64,
    pub passive_capacity: f64,
    /// `passive / approx`, defined as 1 when the approximate capacity
    /// is zero (a disconnected draw transports nothing either way).
    pub ratio: f64,
    pub active_edge_disjoint: usize,
    pub wall_time_ms: f64,
}

/// Aggregates over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub mean_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Histogram of the active edge-disjoint path counts.
    pub active_histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Error)]
pub enum TrialError {
    #[error("a sweep needs at least one trial")]
    NoTrials,
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
    #[error("trial {trial_id}: {source}")]
    Trial {
        trial_id: usize,
        source: SolveError,
    },
}

fn run_one(
    topology: &Network,
    cfg: &TrialConfig,
    dist: &CapacityDist,
    trial_id: usize,
) -> Result<TrialRecord, TrialError> {
    let started = Instant::now();
    let net = draw_capacities(topology, dist, cfg.seed, trial_id as u64)?;
    let thresholds = ThresholdMap::uniform(&net, cfg.theta)?;
    let wrap = |source| TrialError::Trial { trial_id, source };
    let unconstrained = approx_capacity(&net).map_err(wrap)?;
    let constrained = passive_capacity(&net, &thresholds).map_err(wrap)?;
    let ratio = if unconstrained.rate() > 0.0 {
        constrained.rate() / unconstrained.rate()
    } else {
        1.0
    };
    Ok(TrialRecord {
        trial_id,
        seed: cfg.seed,
        approx_capacity: unconstrained.rate(),
        passive_capacity: constrained.rate(),
        ratio,
        active_edge_disjoint: active_edge_disjoint(&constrained, &net),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    })
}

fn prepare(cfg: &TrialConfig) -> Result<(Network, CapacityDist), TrialError> {
    if cfg.trials == 0 {
        return Err(TrialError::NoTrials);
    }
    let dist = CapacityDist::new(cfg.cap_mean, cfg.cap_variance)?;
    let topology = generate_topology(cfg.n_relays, 1, &cfg.topology, cfg.seed)?;
    Ok((topology, dist))
}

/// Runs the sweep sequentially.
pub fn run_trials_sequential(cfg: &TrialConfig) -> Result<Vec<TrialRecord>, TrialError> {
    let (topology, dist) = prepare(cfg)?;
    (0..cfg.trials)
        .map(|t| run_one(&topology, cfg, &dist, t))
        .collect()
}

/// Runs the sweep on the rayon pool; records still come back in trial
/// order, so output is identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn run_trials_parallel(cfg: &TrialConfig) -> Result<Vec<TrialRecord>, TrialError> {
    use rayon::prelude::*;
    let (topology, dist) = prepare(cfg)?;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_one(&topology, cfg, &dist, t))
        .collect()
}

/// Runs the sweep, parallel when the feature is enabled.
pub fn run_trials(cfg: &TrialConfig) -> Result<Vec<TrialRecord>, TrialError> {
    #[cfg(feature = "parallel")]
    {
        run_trials_parallel(cfg)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_sequential(cfg)
    }
}

/// Aggregate statistics of a sweep.
pub fn summarize(records: &[TrialRecord]) -> TrialSummary {
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for r in records {
        *histogram.entry(r.active_edge_disjoint).or_default() += 1;
        min_ratio = min_ratio.min(r.ratio);
        max_ratio = max_ratio.max(r.ratio);
        sum += r.ratio;
    }
    TrialSummary {
        trials: records.len(),
        mean_ratio: if records.is_empty() {
            0.0
        } else {
            sum / records.len() as f64
        },
        min_ratio: if records.is_empty() { 0.0 } else { min_ratio },
        max_ratio: if records.is_empty() { 0.0 } else { max_ratio },
        active_histogram: histogram,
    }
}

/// Formats a float with nine significant digits, positional for
/// moderate exponents, trailing zeros trimmed. Deterministic, so CSV
/// output is byte-stable across runs.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if (-4..=12).contains(&exp) {
        let rounded: f64 = sci.parse().expect("scientific form parses back");
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV rendering with a mandatory header. The wall-time column is
/// opt-in: timings vary run to run, and the default output must be
/// byte-identical for a fixed seed.
pub fn to_csv(records: &[TrialRecord], include_timing: bool) -> String {
    let mut out = String::new();
    out.push_str("trial_id,seed,approx_capacity,passive_capacity,ratio,active_edge_disjoint");
    if include_timing {
        out.push_str(",wall_time_ms");
    }
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}",
            r.trial_id,
            r.seed,
            format_sig(r.approx_capacity),
            format_sig(r.passive_capacity),
            format_sig(r.ratio),
            r.active_edge_disjoint
        ));
        if include_timing {
            out.push_str(&format!(",{}", format_sig(r.wall_time_ms)));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> TrialConfig {
        TrialConfig {
            n_relays: 6,
            trials: 8,
            theta: 0.2,
            cap_mean: 1.0,
            cap_variance: 0.1,
            topology: TopologySpec::Layered {
                layers: 2,
                edge_prob: 0.6,
            },
            seed: 11,
        }
    }

    fn strip_times(records: &[TrialRecord]) -> Vec<TrialRecord> {
        records
            .iter()
            .cloned()
            .map(|mut r| {
                r.wall_time_ms = 0.0;
                r
            })
            .collect()
    }

    #[test]
    fn sequential_runs_are_reproducible() {
        let cfg = small_cfg();
        let a = run_trials_sequential(&cfg).unwrap();
        let b = run_trials_sequential(&cfg).unwrap();
        assert_eq!(strip_times(&a), strip_times(&b));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let cfg = small_cfg();
        let seq = run_trials_sequential(&cfg).unwrap();
        let par = run_trials_parallel(&cfg).unwrap();
        assert_eq!(strip_times(&seq), strip_times(&par));
    }

    #[test]
    fn ratios_respect_the_naive_bound() {
        let cfg = small_cfg();
        let records = run_trials(&cfg).unwrap();
        for r in &records {
            assert!(
                r.ratio >= cfg.theta - 1e-9 && r.ratio <= 1.0 + 1e-9,
                "trial {}: ratio {}",
                r.trial_id,
                r.ratio
            );
        }
    }

    #[test]
    fn unit_parallel_paths_hit_ratio_one() {
        let cfg = TrialConfig {
            n_relays: 10,
            trials: 5,
            theta: 0.2,
            cap_mean: 1.0,
            cap_variance: 0.0,
            topology: TopologySpec::ParallelPaths { count: 5 },
            seed: 3,
        };
        let records = run_trials(&cfg).unwrap();
        for r in &records {
            assert!((r.ratio - 1.0).abs() < 1e-9);
            assert_eq!(r.active_edge_disjoint, 5);
            assert!((r.approx_capacity - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn summary_is_consistent_with_records() {
        let cfg = small_cfg();
        let records = run_trials(&cfg).unwrap();
        let s = summarize(&records);
        assert_eq!(s.trials, records.len());
        let mean: f64 = records.iter().map(|r| r.ratio).sum::<f64>() / records.len() as f64;
        assert!((s.mean_ratio - mean).abs() < 1e-12);
        assert_eq!(
            s.active_histogram.values().sum::<usize>(),
            records.len()
        );
    }

    #[test]
    fn csv_is_stable_and_headed() {
        let cfg = small_cfg();
        let a = to_csv(&run_trials(&cfg).unwrap(), false);
        let b = to_csv(&run_trials(&cfg).unwrap(), false);
        assert_eq!(a, b);
        assert!(a.starts_with(
            "trial_id,seed,approx_capacity,passive_capacity,ratio,active_edge_disjoint\n"
        ));
        assert_eq!(a.lines().count(), cfg.trials + 1);
        let with_timing = to_csv(&run_trials(&cfg).unwrap(), true);
        assert!(with_timing.starts_with(
            "trial_id,seed,approx_capacity,passive_capacity,ratio,active_edge_disjoint,wall_time_ms\n"
        ));
    }

    #[test]
    fn zero_trials_is_an_error() {
        let mut cfg = small_cfg();
        cfg.trials = 0;
        assert!(matches!(
            run_trials(&cfg),
            Err(TrialError::NoTrials)
        ));
    }

    #[test]
    fn format_sig_examples() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.2), "0.2");
        assert_eq!(format_sig(1.2345678912345), "1.23456789");
        assert_eq!(format_sig(-0.5), "-0.5");
        assert_eq!(format_sig(123456.789123), "123456.789");
        assert_eq!(format_sig(1.5e13), "1.5e13");
        assert_eq!(format_sig(2.5e-4), "0.00025");
        assert_eq!(format_sig(2.5e-7), "2.5e-7");
        assert_eq!(format_sig(3.0e-9), "3e-9");
    }
}
