//! Reductions between the passive-user problem and secure communication
//! against a link-wiretapping eavesdropper, on unit-capacity networks.
//!
//! Passive to secure: a threshold-feasible scheme exposes at most `θ_ji`
//! of the traffic on any wiretapped link, so an adversary reading its
//! worst-case `K` links costs at most the sum of the `K` largest
//! thresholds off the passive capacity.
//!
//! Secure to passive: equal time sharing over a maximum disjoint-path
//! family (the shape of high-rate secure schemes) becomes a feasible
//! passive scheme once each path's share is clipped to its smallest
//! link threshold.

use thiserror::Error;

use crate::builders::{passive_capacity, P1Solution, SolveError};
use crate::checker::check_path_activations;
use crate::disjoint::{count_edge_disjoint, count_vertex_disjoint};
use crate::model::{Network, NodeId, ThresholdMap};
use crate::FEAS_EPS;

#[derive(Debug, Error)]
pub enum SecurityError {
    #[error("cannot wiretap {k} of {n_links} links")]
    TooManyWiretaps { k: usize, n_links: usize },
    #[error("the reduction assumes unit capacities; link {tx}->{rx} has {capacity}")]
    NonUnitCapacity {
        tx: NodeId,
        rx: NodeId,
        capacity: f64,
    },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("emitted activation profile failed the feasibility check: {}", violations.join("; "))]
    InfeasibleEmission { violations: Vec<String> },
}

/// Result of one reduction direction.
#[derive(Debug, Clone)]
pub enum ReductionReport {
    /// Secure rate guaranteed by an optimal passive-user scheme.
    PassiveToSecure {
        rate: f64,
        passive_capacity: f64,
        k: usize,
        /// Worst-case activation visible to the eavesdropper: the sum of
        /// the `k` largest link thresholds.
        wiretap_penalty: f64,
    },
    /// Passive-user rate guaranteed by a disjoint-path secure scheme.
    SecureToPassive {
        rate: f64,
        disjoint_count: usize,
        m_beams: usize,
        /// The emitted feasible path-activation profile.
        activations: P1Solution,
    },
}

impl ReductionReport {
    pub fn rate(&self) -> f64 {
        match self {
            Self::PassiveToSecure { rate, .. } => *rate,
            Self::SecureToPassive { rate, .. } => *rate,
        }
    }
}

fn require_unit_capacities(net: &Network) -> Result<(), SecurityError> {
    for l in net.links() {
        if (l.capacity - 1.0).abs() > 1e-9 {
            return Err(SecurityError::NonUnitCapacity {
                tx: l.tx,
                rx: l.rx,
                capacity: l.capacity,
            });
        }
    }
    Ok(())
}

/// Secure rate from the optimal passive scheme: the passive capacity
/// minus the worst-case wiretapped activation, floored at zero.
///
/// The worst case over all `K`-link subsets is the sum of the `K`
/// largest thresholds; no subsets are enumerated.
pub fn passive_to_secure(
    net: &Network,
    thresholds: &ThresholdMap,
    k: usize,
) -> Result<ReductionReport, SecurityError> {
    require_unit_capacities(net)?;
    let n_links = net.links().len();
    if k > n_links {
        return Err(SecurityError::TooManyWiretaps { k, n_links });
    }
    let c = passive_capacity(net, thresholds)?.rate();
    let mut thetas: Vec<f64> = thresholds.iter().map(|(_, t)| t).collect();
    thetas.sort_by(|a, b| b.partial_cmp(a).expect("thresholds are finite"));
    let wiretap_penalty: f64 = thetas.iter().take(k).sum();
    Ok(ReductionReport::PassiveToSecure {
        rate: (c - wiretap_penalty).max(0.0),
        passive_capacity: c,
        k,
        wiretap_penalty,
    })
}

/// Passive-user rate from a disjoint-path secure scheme: each witness
/// path runs for `min(m̂/H, θ_p)` with `m̂ = min(M, H)` and
/// `θ_p` the smallest threshold along the path. For `M = 1` the family
/// is edge-disjoint (`H = H_e`); for `M > 1` vertex-disjoint
/// (`H = H_v`). The emitted profile is re-validated against the node
/// budgets and thresholds before being returned.
///
/// Maximum disjoint families are generally not unique; with non-uniform
/// thresholds the `θ_p` values, and hence the rate, depend on which
/// family is returned. The deterministic certificate extraction makes
/// the choice reproducible.
pub fn secure_to_passive(
    net: &Network,
    thresholds: &ThresholdMap,
    m_beams: usize,
) -> Result<ReductionReport, SecurityError> {
    require_unit_capacities(net)?;
    let cert = if m_beams <= 1 {
        count_edge_disjoint(net)
    } else {
        count_vertex_disjoint(net)
    };
    if cert.count == 0 {
        return Ok(ReductionReport::SecureToPassive {
            rate: 0.0,
            disjoint_count: 0,
            m_beams,
            activations: P1Solution::new(Vec::new()),
        });
    }
    let share = m_beams.min(cert.count) as f64 / cert.count as f64;
    let terms: Vec<_> = cert
        .witness
        .iter()
        .map(|p| {
            let theta_p = p
                .links()
                .map(|(tx, rx)| thresholds.get(tx, rx).unwrap_or(1.0))
                .fold(f64::INFINITY, f64::min);
            (p.clone(), share.min(theta_p))
        })
        .collect();
    let activations = P1Solution::new(terms);
    let violations =
        check_path_activations(net, Some(thresholds), activations.terms(), m_beams, FEAS_EPS);
    if !violations.is_empty() {
        return Err(SecurityError::InfeasibleEmission { violations });
    }
    Ok(ReductionReport::SecureToPassive {
        rate: activations.rate(),
        disjoint_count: cert.count,
        m_beams,
        activations,
    })
}
