//! Closed-form lower bounds on the passive capacity, each with a
//! feasible activation certificate, and the disjoint-path-count
//! condition for achieving a target fraction of the capacity.
//!
//! All three bounds rescale the unconstrained optimum so it satisfies
//! the activation thresholds:
//!
//! * naive: scale everything by the smallest threshold `θ̂`;
//! * activation ratio: scale by `θ̃ / λ̃`, the smallest threshold among
//!   activated links over the largest activation, never below the
//!   naive bound since `λ̃ <= 1` and `θ̂ <= θ̃`;
//! * per path: scale each decomposed path individually by
//!   `min(1, θ̃_p / λ̃_p)` over that path's links, which dominates the
//!   uniform ratio scaling path by path.
//!
//! The optimum point is generally not unique, so the two optimum-derived
//! bounds are functions of the particular (deterministically chosen)
//! optimum, not of the network alone; different optima may yield
//! different, equally valid bound values. Certificates are re-validated
//! by the independent checker on every call.

use thiserror::Error;

use crate::builders::{approx_capacity, P1Solution, P2Solution, SolveError};
use crate::checker::check_path_activations;
use crate::disjoint::{count_edge_disjoint, count_vertex_disjoint};
use crate::model::{Network, NodeId, ThresholdMap};
use crate::paths::{decompose_flow, DecomposeError};
use crate::schedule::{
    edge_disjoint_schedule, vertex_disjoint_schedule, BeamSchedule, ScheduleError,
};
use crate::{FEAS_EPS, RESIDUE_EPS};

#[derive(Debug, Error)]
pub enum BoundError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("bound certificate failed the independent feasibility check: {}", violations.join("; "))]
    CertificateInfeasible { violations: Vec<String> },
}

/// All three closed-form bounds next to the LP value, with their
/// certificates. The chain `naive <= activation_ratio <= per_path <=
/// lp_value` holds up to solver tolerance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub naive: f64,
    pub activation_ratio: f64,
    pub per_path: f64,
    pub lp_value: f64,
    pub naive_certificate: P1Solution,
    pub activation_ratio_certificate: P1Solution,
    pub per_path_certificate: P1Solution,
}

struct Baseline {
    optimum: P2Solution,
    decomposition: P1Solution,
}

fn baseline(net: &Network) -> Result<Baseline, BoundError> {
    let optimum = approx_capacity(net)?;
    let decomposition = decompose_flow(&optimum, net)?;
    Ok(Baseline {
        optimum,
        decomposition,
    })
}

fn certify(
    net: &Network,
    thresholds: &ThresholdMap,
    cert: &P1Solution,
) -> Result<(), BoundError> {
    let violations = check_path_activations(net, Some(thresholds), cert.terms(), 1, FEAS_EPS);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(BoundError::CertificateInfeasible { violations })
    }
}

fn naive_from(base: &Baseline, thresholds: &ThresholdMap) -> (f64, P1Solution) {
    let theta_hat = thresholds.min_threshold();
    (
        theta_hat * base.optimum.rate(),
        base.decomposition.scaled(theta_hat),
    )
}

fn ratio_from(base: &Baseline, thresholds: &ThresholdMap) -> (f64, P1Solution) {
    let lambda_max = base
        .optimum
        .per_link()
        .iter()
        .map(|u| u.activation)
        .fold(0.0f64, f64::max);
    if lambda_max <= RESIDUE_EPS {
        // Zero-rate optimum: nothing is activated, the bound is zero.
        return (0.0, P1Solution::new(Vec::new()));
    }
    let theta_min_active = base
        .optimum
        .per_link()
        .iter()
        .filter(|u| u.activation > RESIDUE_EPS)
        .map(|u| thresholds.get(u.tx, u.rx).unwrap_or(1.0))
        .fold(f64::INFINITY, f64::min);
    // A ratio above one means the optimum already satisfies every
    // threshold, so the passive capacity equals the unconstrained value.
    let ratio = (theta_min_active / lambda_max).min(1.0);
    (
        ratio * base.optimum.rate(),
        base.decomposition.scaled(ratio),
    )
}

fn per_path_from(
    net: &Network,
    base: &Baseline,
    thresholds: &ThresholdMap,
) -> (f64, P1Solution) {
    // Activations recomputed from the decomposition itself, so the bound
    // is self-consistent even when the decomposition splits the optimum
    // differently than the LP point.
    let link_act = base.decomposition.link_activations(net);
    let terms: Vec<_> = base
        .decomposition
        .terms()
        .iter()
        .map(|(p, x)| {
            let theta_p = p
                .links()
                .map(|(tx, rx)| thresholds.get(tx, rx).unwrap_or(1.0))
                .fold(f64::INFINITY, f64::min);
            let lambda_p = p
                .links()
                .map(|l| link_act.get(&l).copied().unwrap_or(0.0))
                .fold(0.0f64, f64::max);
            let scale = if lambda_p > RESIDUE_EPS {
                (theta_p / lambda_p).min(1.0)
            } else {
                0.0
            };
            (p.clone(), x * scale)
        })
        .collect();
    let cert = P1Solution::new(terms);
    (cert.rate(), cert)
}

/// Naive bound `θ̂ C̄`: the unconstrained optimum scaled by the smallest
/// threshold anywhere in the network.
pub fn bound_naive(
    net: &Network,
    thresholds: &ThresholdMap,
) -> Result<(f64, P1Solution), BoundError> {
    let base = baseline(net)?;
    let (value, cert) = naive_from(&base, thresholds);
    certify(net, thresholds, &cert)?;
    Ok((value, cert))
}

/// Activation-ratio bound `min(1, θ̃/λ̃) C̄` over the activated links of
/// the unconstrained optimum.
pub fn bound_activation_ratio(
    net: &Network,
    thresholds: &ThresholdMap,
) -> Result<(f64, P1Solution), BoundError> {
    let base = baseline(net)?;
    let (value, cert) = ratio_from(&base, thresholds);
    certify(net, thresholds, &cert)?;
    Ok((value, cert))
}

/// Per-path bound `Σ_p min(x*_p, θ̃_p x*_p / λ̃_p) C_p` over the
/// decomposed optimum.
pub fn bound_per_path(
    net: &Network,
    thresholds: &ThresholdMap,
) -> Result<(f64, P1Solution), BoundError> {
    let base = baseline(net)?;
    let (value, cert) = per_path_from(net, &base, thresholds);
    certify(net, thresholds, &cert)?;
    Ok((value, cert))
}

/// Computes all three bounds plus the LP passive capacity from one
/// shared optimum.
pub fn bound_report(net: &Network, thresholds: &ThresholdMap) -> Result<BoundReport, BoundError> {
    let base = baseline(net)?;
    let (naive, naive_certificate) = naive_from(&base, thresholds);
    let (activation_ratio, activation_ratio_certificate) = ratio_from(&base, thresholds);
    let (per_path, per_path_certificate) = per_path_from(net, &base, thresholds);
    for cert in [
        &naive_certificate,
        &activation_ratio_certificate,
        &per_path_certificate,
    ] {
        certify(net, thresholds, cert)?;
    }
    let lp_value = crate::builders::passive_capacity(net, thresholds)?.rate();
    Ok(BoundReport {
        naive,
        activation_ratio,
        per_path,
        lp_value,
        naive_certificate,
        activation_ratio_certificate,
        per_path_certificate,
    })
}

#[derive(Debug, Error)]
pub enum PathCountError {
    #[error("path-count conditions assume unit capacities; link {tx}->{rx} has {capacity}")]
    NonUnitCapacity {
        tx: NodeId,
        rx: NodeId,
        capacity: f64,
    },
    #[error("threshold {theta} outside (0, 1]")]
    InvalidTheta { theta: f64 },
    #[error("target fraction {theta_c} outside [0, 1]")]
    InvalidTargetFraction { theta_c: f64 },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

/// Outcome of the disjoint-path-count condition for the target rate
/// `θ_c C̄` on a unit-capacity network.
#[derive(Debug, Clone)]
pub struct PathCountReport {
    /// Whether enough disjoint paths exist. For `M = 1` the condition is
    /// both necessary and sufficient; for `M > 1` it is sufficient.
    pub achievable: bool,
    /// Required number of disjoint paths, `(θ_c / θ) C̄`.
    pub required: f64,
    /// Available count: `H_e` for `M = 1`, `H_v` for `M > 1`.
    pub actual: usize,
    /// Unit-capacity approximate capacity: `1` or `min(M, H_v)`.
    pub cbar: f64,
    /// Target rate `θ_c C̄`.
    pub rate: f64,
    /// The constructive time-sharing schedule, when achievable.
    pub schedule: Option<BeamSchedule>,
}

/// Checks whether the rate `θ_c C̄` is achievable under a uniform
/// activation threshold `θ` using disjoint-path time sharing. With
/// per-link thresholds, pass the minimum threshold `θ̂`.
pub fn path_count_check(
    net: &Network,
    theta: f64,
    theta_c: f64,
    m_beams: usize,
) -> Result<PathCountReport, PathCountError> {
    for l in net.links() {
        if (l.capacity - 1.0).abs() > 1e-9 {
            return Err(PathCountError::NonUnitCapacity {
                tx: l.tx,
                rx: l.rx,
                capacity: l.capacity,
            });
        }
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(PathCountError::InvalidTheta { theta });
    }
    if !(0.0..=1.0).contains(&theta_c) {
        return Err(PathCountError::InvalidTargetFraction { theta_c });
    }

    if m_beams <= 1 {
        let cert = count_edge_disjoint(net);
        let cbar = if cert.count > 0 { 1.0 } else { 0.0 };
        let required = theta_c / theta * cbar;
        let achievable = cert.count as f64 >= required - 1e-9;
        let schedule = if achievable && cert.count > 0 && theta_c > 0.0 {
            Some(edge_disjoint_schedule(&cert, theta_c, cbar, theta)?.schedule)
        } else {
            None
        };
        Ok(PathCountReport {
            achievable,
            required,
            actual: cert.count,
            cbar,
            rate: theta_c * cbar,
            schedule,
        })
    } else {
        let cert = count_vertex_disjoint(net);
        let cbar = cert.count.min(m_beams) as f64;
        let required = theta_c / theta * cbar;
        let achievable = cert.count as f64 >= required - 1e-9;
        let schedule = if achievable && cert.count > 0 && theta_c > 0.0 {
            Some(vertex_disjoint_schedule(&cert, m_beams, theta_c)?.schedule)
        } else {
            None
        };
        Ok(PathCountReport {
            achievable,
            required,
            actual: cert.count,
            cbar,
            rate: theta_c * cbar,
            schedule,
        })
    }
}
