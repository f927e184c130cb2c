//! Seeded random network generation.
//!
//! Topology and capacities are drawn from independent streams of a
//! counter-based RNG, so the same seed always produces the same network
//! and a fixed topology can have its capacities redrawn per trial.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::model::{Link, Network};

/// Shape of a generated network.
///
/// * `Layered`: relays split into layers of near-equal width; the source
///   feeds the first layer, the last layer feeds the destination, and
///   consecutive layers are joined by a deterministic backbone (so the
///   destination is always reachable) plus Erdős–Rényi extra edges with
///   probability `edge_prob`.
/// * `CompleteDag`: every link `i -> j` with `i < j` in node order.
/// * `ParallelPaths`: `count` node-disjoint relay chains of near-equal
///   length.
#[derive(Debug, Clone, PartialEq)]
pub enum TopologySpec {
    Layered { layers: usize, edge_prob: f64 },
    CompleteDag,
    ParallelPaths { count: usize },
}

impl Default for TopologySpec {
    fn default() -> Self {
        Self::Layered {
            layers: 2,
            edge_prob: 0.5,
        }
    }
}

impl std::str::FromStr for TopologySpec {
    type Err = GenerateError;

    /// Accepted forms: `layered`, `layered:<layers>`,
    /// `layered:<layers>:<edge_prob>`, `complete-dag`,
    /// `parallel-paths:<k>`, `parallel-paths(<k>)`.
    fn from_str(s: &str) -> Result<Self, GenerateError> {
        let bad = |s: &str| GenerateError::InvalidSpec {
            spec: s.to_string(),
        };
        if s == "complete-dag" {
            return Ok(Self::CompleteDag);
        }
        if let Some(rest) = s.strip_prefix("parallel-paths") {
            let arg = rest
                .strip_prefix(':')
                .or_else(|| rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')))
                .ok_or_else(|| bad(s))?;
            let count: usize = arg.parse().map_err(|_| bad(s))?;
            if count == 0 {
                return Err(bad(s));
            }
            return Ok(Self::ParallelPaths { count });
        }
        if let Some(rest) = s.strip_prefix("layered") {
            let mut layers = 2usize;
            let mut edge_prob = 0.5f64;
            if !rest.is_empty() {
                let mut parts = rest.strip_prefix(':').ok_or_else(|| bad(s))?.split(':');
                layers = parts
                    .next()
                    .ok_or_else(|| bad(s))?
                    .parse()
                    .map_err(|_| bad(s))?;
                if let Some(p) = parts.next() {
                    edge_prob = p.parse().map_err(|_| bad(s))?;
                }
                if parts.next().is_some() {
                    return Err(bad(s));
                }
            }
            if layers == 0 || !(0.0..=1.0).contains(&edge_prob) {
                return Err(bad(s));
            }
            return Ok(Self::Layered { layers, edge_prob });
        }
        Err(bad(s))
    }
}

impl std::fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Layered { layers, edge_prob } => write!(f, "layered:{layers}:{edge_prob}"),
            Self::CompleteDag => write!(f, "complete-dag"),
            Self::ParallelPaths { count } => write!(f, "parallel-paths:{count}"),
        }
    }
}

/// Gaussian capacity distribution; samples are clamped below at zero.
///
/// Clamping keeps the distribution essentially intact at the variances of
/// interest (at variance 0.1 around mean 1 the mass below zero is about
/// 0.08%) and avoids the bias a rejection loop would introduce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityDist {
    pub mean: f64,
    pub variance: f64,
}

impl CapacityDist {
    pub fn new(mean: f64, variance: f64) -> Result<Self, GenerateError> {
        if !mean.is_finite() || !variance.is_finite() || variance < 0.0 {
            return Err(GenerateError::InvalidDistribution { mean, variance });
        }
        Ok(Self { mean, variance })
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum GenerateError {
    #[error("invalid capacity distribution: mean {mean}, variance {variance}")]
    InvalidDistribution { mean: f64, variance: f64 },
    #[error("invalid topology spec: {spec}")]
    InvalidSpec { spec: String },
    #[error("parallel-paths:{count} needs at least {count} relays, got {n_relays}")]
    TooFewRelays { count: usize, n_relays: usize },
}

// Streams of the ChaCha counter keep topology and per-trial capacity
// draws independent while sharing one seed.
const TOPOLOGY_STREAM: u64 = 0;
const CAPACITY_STREAM_BASE: u64 = 1;

fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generates the topology only, with unit capacities.
pub fn generate_topology(
    n_relays: usize,
    m_beams: usize,
    spec: &TopologySpec,
    seed: u64,
) -> Result<Network, GenerateError> {
    let mut rng = seeded_rng(seed, TOPOLOGY_STREAM);
    let links = match spec {
        TopologySpec::Layered { layers, edge_prob } => {
            layered_links(n_relays, *layers, *edge_prob, &mut rng)
        }
        TopologySpec::CompleteDag => complete_dag_links(n_relays),
        TopologySpec::ParallelPaths { count } => parallel_path_links(n_relays, *count)?,
    };
    Ok(Network::new(n_relays, m_beams, links))
}

/// Generates a network with capacities drawn i.i.d. from `dist`.
/// Deterministic for a fixed `(spec, seed)` pair.
pub fn generate_random(
    n_relays: usize,
    m_beams: usize,
    spec: &TopologySpec,
    dist: &CapacityDist,
    seed: u64,
) -> Result<Network, GenerateError> {
    let net = generate_topology(n_relays, m_beams, spec, seed)?;
    draw_capacities(&net, dist, seed, 0)
}

/// Redraws every capacity of `net` from `dist`, keeping the topology.
/// `trial` selects an independent stream so sweeps can redraw per trial.
pub fn draw_capacities(
    net: &Network,
    dist: &CapacityDist,
    seed: u64,
    trial: u64,
) -> Result<Network, GenerateError> {
    CapacityDist::new(dist.mean, dist.variance)?;
    let mut rng = seeded_rng(seed, CAPACITY_STREAM_BASE + trial);
    let caps: Vec<f64> = if dist.variance == 0.0 {
        vec![dist.mean.max(0.0); net.links().len()]
    } else {
        let normal = Normal::new(dist.mean, dist.variance.sqrt())
            .map_err(|_| GenerateError::InvalidDistribution {
                mean: dist.mean,
                variance: dist.variance,
            })?;
        net.links()
            .iter()
            .map(|_| normal.sample(&mut rng).max(0.0))
            .collect()
    };
    Ok(net.with_capacities(&caps))
}

fn layer_sizes(n_relays: usize, layers: usize) -> Vec<usize> {
    let layers = layers.min(n_relays).max(1);
    let base = n_relays / layers;
    let rem = n_relays % layers;
    (0..layers)
        .map(|i| base + usize::from(i < rem))
        .collect()
}

fn layered_links(
    n_relays: usize,
    layers: usize,
    edge_prob: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<Link> {
    let dest = n_relays + 1;
    if n_relays == 0 {
        return vec![Link::new(0, dest, 1.0)];
    }
    let sizes = layer_sizes(n_relays, layers);
    let mut layer_nodes: Vec<Vec<usize>> = Vec::with_capacity(sizes.len());
    let mut next = 1usize;
    for &s in &sizes {
        layer_nodes.push((next..next + s).collect());
        next += s;
    }

    let mut links = Vec::new();
    for &v in &layer_nodes[0] {
        links.push(Link::new(0, v, 1.0));
    }
    for w in layer_nodes.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        // Backbone: every node keeps at least one outgoing and one
        // incoming inter-layer edge.
        let mut present = std::collections::BTreeSet::new();
        for i in 0..a.len().max(b.len()) {
            present.insert((a[i % a.len()], b[i % b.len()]));
        }
        for &u in a {
            for &v in b {
                if !present.contains(&(u, v)) && rng.random_range(0.0..1.0) < edge_prob {
                    present.insert((u, v));
                }
            }
        }
        links.extend(present.into_iter().map(|(u, v)| Link::new(u, v, 1.0)));
    }
    for &v in layer_nodes.last().unwrap() {
        links.push(Link::new(v, dest, 1.0));
    }
    links
}

fn complete_dag_links(n_relays: usize) -> Vec<Link> {
    let dest = n_relays + 1;
    let mut links = Vec::new();
    for tx in 0..=n_relays {
        for rx in (tx + 1)..=dest {
            if rx >= 1 {
                links.push(Link::new(tx, rx, 1.0));
            }
        }
    }
    links
}

fn parallel_path_links(n_relays: usize, count: usize) -> Result<Vec<Link>, GenerateError> {
    let dest = n_relays + 1;
    if n_relays == 0 {
        return if count == 1 {
            Ok(vec![Link::new(0, dest, 1.0)])
        } else {
            Err(GenerateError::TooFewRelays {
                count,
                n_relays,
            })
        };
    }
    if count > n_relays {
        return Err(GenerateError::TooFewRelays { count, n_relays });
    }
    let sizes = layer_sizes(n_relays, count);
    let mut links = Vec::new();
    let mut next = 1usize;
    for &s in &sizes {
        let chain: Vec<usize> = (next..next + s).collect();
        next += s;
        links.push(Link::new(0, chain[0], 1.0));
        for w in chain.windows(2) {
            links.push(Link::new(w[0], w[1], 1.0));
        }
        links.push(Link::new(*chain.last().unwrap(), dest, 1.0));
    }
    Ok(links)
}
