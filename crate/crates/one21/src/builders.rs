//! LP builders for the two equivalent capacity formulations, and the
//! solution types they produce.
//!
//! The edge-based program (P2) has one flow variable `F` and one
//! activation variable `λ` per link: flow is bounded by `λ ℓ` (P2a),
//! conserved at every relay (P2b), and each node transmits and receives
//! for at most a unit fraction of time (P2c, P2d). The path-based
//! program (P1) has one activation variable `x_p` per source-destination
//! path, with the same per-node time budgets expressed through the
//! per-path link fractions `C_p / ℓ`. Activation thresholds enter P2 as
//! upper bounds `λ <= θ` and P1 as per-link rows
//! `Σ_p x_p C_p / ℓ <= θ` over the paths crossing the link.
//!
//! Zero-capacity links carry nothing and get no LP columns.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lp::{LpError, LpProblem, LpRow, LpStatus, Relation, VarLabel};
use crate::model::{Network, NodeId, Path, ThresholdMap};
use crate::simplex;

/// Hard cap on the number of path columns accepted by [`build_p1`]; the
/// path count can grow exponentially with the relay count, and the
/// edge-based formulation is the intended tool past this size.
pub const P1_PATH_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum BuildError {
    #[error("the edge-based LP is defined for M = 1, got M = {m_beams}")]
    P2RequiresSingleBeam { m_beams: usize },
    #[error("path set size {n_paths} exceeds the limit {limit}; use the edge-based LP")]
    TooManyPaths { n_paths: usize, limit: usize },
    #[error("path uses link {tx}->{rx} which is absent or has zero capacity")]
    PathNotInNetwork { tx: NodeId, rx: NodeId },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("expected an optimum but the solver reported {status:?}")]
    UnexpectedStatus { status: LpStatus },
}

/// Per-link flow and activation in an edge-based optimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkUsage {
    pub tx: NodeId,
    pub rx: NodeId,
    pub flow: f64,
    pub activation: f64,
}

/// Optimal point of the edge-based LP: flows, activations, and the
/// achieved rate.
#[derive(Debug, Clone, PartialEq)]
pub struct P2Solution {
    per_link: Vec<LinkUsage>,
    rate: f64,
}

impl P2Solution {
    pub fn new(mut per_link: Vec<LinkUsage>, rate: f64) -> Self {
        per_link.sort_by_key(|u| (u.tx, u.rx));
        Self { per_link, rate }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Links in `(tx, rx)` order; zero-capacity links are absent.
    pub fn per_link(&self) -> &[LinkUsage] {
        &self.per_link
    }

    pub fn activation(&self, tx: NodeId, rx: NodeId) -> Option<f64> {
        self.per_link
            .binary_search_by(|u| (u.tx, u.rx).cmp(&(tx, rx)))
            .ok()
            .map(|i| self.per_link[i].activation)
    }

    pub fn flow(&self, tx: NodeId, rx: NodeId) -> Option<f64> {
        self.per_link
            .binary_search_by(|u| (u.tx, u.rx).cmp(&(tx, rx)))
            .ok()
            .map(|i| self.per_link[i].flow)
    }

    pub fn activation_map(&self) -> BTreeMap<(NodeId, NodeId), f64> {
        self.per_link
            .iter()
            .map(|u| ((u.tx, u.rx), u.activation))
            .collect()
    }

    /// Checks the edge-based constraints (and thresholds, when given)
    /// directly on the stored point; returns human-readable violations.
    pub fn check_invariants(
        &self,
        net: &Network,
        thresholds: Option<&ThresholdMap>,
        eps: f64,
    ) -> Vec<String> {
        let mut out = Vec::new();
        let mut tx_sum: BTreeMap<NodeId, f64> = BTreeMap::new();
        let mut rx_sum: BTreeMap<NodeId, f64> = BTreeMap::new();
        let mut net_flow: BTreeMap<NodeId, f64> = BTreeMap::new();
        for u in &self.per_link {
            let cap = net.capacity(u.tx, u.rx).unwrap_or(0.0);
            if u.activation < -eps {
                out.push(format!("negative activation on {}->{}", u.tx, u.rx));
            }
            if u.flow < -eps || u.flow > u.activation * cap + eps {
                out.push(format!(
                    "flow {} outside [0, {}] on {}->{}",
                    u.flow,
                    u.activation * cap,
                    u.tx,
                    u.rx
                ));
            }
            if let Some(t) = thresholds {
                let theta = t.get(u.tx, u.rx).unwrap_or(1.0);
                if u.activation > theta + eps {
                    out.push(format!(
                        "activation {} exceeds threshold {theta} on {}->{}",
                        u.activation, u.tx, u.rx
                    ));
                }
            }
            *tx_sum.entry(u.tx).or_default() += u.activation;
            *rx_sum.entry(u.rx).or_default() += u.activation;
            *net_flow.entry(u.tx).or_default() += u.flow;
            *net_flow.entry(u.rx).or_default() -= u.flow;
        }
        for (&node, &s) in &tx_sum {
            if s > 1.0 + eps {
                out.push(format!("node {node} transmits for {s} > 1"));
            }
        }
        for (&node, &s) in &rx_sum {
            if s > 1.0 + eps {
                out.push(format!("node {node} receives for {s} > 1"));
            }
        }
        for relay in 1..=net.n_relays() {
            let imbalance = net_flow.get(&relay).copied().unwrap_or(0.0);
            if imbalance.abs() > eps {
                out.push(format!("flow imbalance {imbalance} at relay {relay}"));
            }
        }
        out
    }
}

/// A path-based solution: activated paths with their time fractions.
#[derive(Debug, Clone, PartialEq)]
pub struct P1Solution {
    terms: Vec<(Path, f64)>,
}

impl P1Solution {
    pub fn new(terms: Vec<(Path, f64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(Path, f64)] {
        &self.terms
    }

    /// Achieved rate `Σ x_p C_p`.
    pub fn rate(&self) -> f64 {
        self.terms.iter().map(|(p, x)| x * p.capacity()).sum()
    }

    /// Same paths with every activation scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(p, x)| (p.clone(), x * factor))
                .collect(),
        }
    }

    /// Link activations implied by the path activations:
    /// `λ_ji = Σ_{p ∋ (i,j)} x_p C_p / ℓ_ji`.
    pub fn link_activations(&self, net: &Network) -> BTreeMap<(NodeId, NodeId), f64> {
        let mut map = BTreeMap::new();
        for (path, x) in &self.terms {
            for (tx, rx) in path.links() {
                let cap = net.capacity(tx, rx).unwrap_or(f64::NAN);
                *map.entry((tx, rx)).or_insert(0.0) += x * path.capacity() / cap;
            }
        }
        map
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Builds the edge-based LP. Requires `M = 1`: with more beams the
/// per-node rows no longer describe the schedule polytope, and those
/// regimes are handled constructively elsewhere.
pub fn build_p2(net: &Network, thresholds: Option<&ThresholdMap>) -> Result<LpProblem, BuildError> {
    if net.m_beams() != 1 {
        return Err(BuildError::P2RequiresSingleBeam {
            m_beams: net.m_beams(),
        });
    }
    let links: Vec<_> = net.links().iter().filter(|l| l.capacity > 0.0).collect();
    let n_links = links.len();
    let n_vars = 2 * n_links; // flows first, then activations

    let mut labels = Vec::with_capacity(n_vars);
    let mut bounds = Vec::with_capacity(n_vars);
    let mut objective = vec![0.0; n_vars];
    for l in &links {
        labels.push(VarLabel::Flow { tx: l.tx, rx: l.rx });
        bounds.push((0.0, f64::INFINITY));
    }
    for l in &links {
        labels.push(VarLabel::Activation { tx: l.tx, rx: l.rx });
        let hi = match thresholds {
            Some(t) => t.get(l.tx, l.rx).unwrap_or(1.0),
            None => 1.0,
        };
        bounds.push((0.0, hi));
    }
    for (i, l) in links.iter().enumerate() {
        if l.rx == net.destination() {
            objective[i] = 1.0;
        }
    }

    let mut rows = Vec::new();
    // (P2a) F <= λ ℓ per link.
    for (i, l) in links.iter().enumerate() {
        let mut coeffs = vec![0.0; n_vars];
        coeffs[i] = 1.0;
        coeffs[n_links + i] = -l.capacity;
        rows.push(LpRow::new(
            format!("cap_{}_{}", l.tx, l.rx),
            coeffs,
            Relation::Le,
            0.0,
        ));
    }
    // (P2b) flow conservation at each relay.
    for relay in 1..=net.n_relays() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (i, l) in links.iter().enumerate() {
            if l.tx == relay {
                coeffs[i] += 1.0;
                touched = true;
            }
            if l.rx == relay {
                coeffs[i] -= 1.0;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(
                format!("conserve_{relay}"),
                coeffs,
                Relation::Eq,
                0.0,
            ));
        }
    }
    // (P2c) unit transmit time per node.
    for node in 0..=net.n_relays() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (i, l) in links.iter().enumerate() {
            if l.tx == node {
                coeffs[n_links + i] = 1.0;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(format!("tx_{node}"), coeffs, Relation::Le, 1.0));
        }
    }
    // (P2d) unit receive time per node.
    for node in 1..=net.destination() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (i, l) in links.iter().enumerate() {
            if l.rx == node {
                coeffs[n_links + i] = 1.0;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(format!("rx_{node}"), coeffs, Relation::Le, 1.0));
        }
    }

    Ok(LpProblem {
        objective,
        rows,
        bounds,
        labels,
    })
}

/// Builds the path-based LP over the given paths. A strict subset of all
/// simple paths yields a lower bound on the full optimum.
pub fn build_p1(
    net: &Network,
    paths: &[Path],
    thresholds: Option<&ThresholdMap>,
) -> Result<LpProblem, BuildError> {
    if paths.len() > P1_PATH_LIMIT {
        return Err(BuildError::TooManyPaths {
            n_paths: paths.len(),
            limit: P1_PATH_LIMIT,
        });
    }
    for p in paths {
        for (tx, rx) in p.links() {
            if net.capacity(tx, rx).is_none_or(|c| c <= 0.0) {
                return Err(BuildError::PathNotInNetwork { tx, rx });
            }
        }
    }
    let n_vars = paths.len();
    let objective: Vec<f64> = paths.iter().map(|p| p.capacity()).collect();
    let bounds = vec![(0.0, f64::INFINITY); n_vars];
    let labels: Vec<VarLabel> = (0..n_vars).map(VarLabel::PathUse).collect();

    let mut rows = Vec::new();
    // (P1b) transmit budget at each node crossed by a path.
    for node in 0..=net.n_relays() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (j, p) in paths.iter().enumerate() {
            if let Some(next) = p.next_node(node) {
                let cap = net.capacity(node, next).expect("validated above");
                coeffs[j] = p.capacity() / cap;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(format!("tx_{node}"), coeffs, Relation::Le, 1.0));
        }
    }
    // (P1c) receive budget.
    for node in 1..=net.destination() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (j, p) in paths.iter().enumerate() {
            if let Some(prev) = p.prev_node(node) {
                let cap = net.capacity(prev, node).expect("validated above");
                coeffs[j] = p.capacity() / cap;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(format!("rx_{node}"), coeffs, Relation::Le, 1.0));
        }
    }
    // Threshold rows: the activation a link inherits from the paths
    // crossing it stays below its threshold.
    if let Some(t) = thresholds {
        for l in net.links().iter().filter(|l| l.capacity > 0.0) {
            let mut coeffs = vec![0.0; n_vars];
            let mut touched = false;
            for (j, p) in paths.iter().enumerate() {
                if p.contains_link(l.tx, l.rx) {
                    coeffs[j] = p.capacity() / l.capacity;
                    touched = true;
                }
            }
            if touched {
                rows.push(LpRow::new(
                    format!("theta_{}_{}", l.tx, l.rx),
                    coeffs,
                    Relation::Le,
                    t.get(l.tx, l.rx).unwrap_or(1.0),
                ));
            }
        }
    }

    Ok(LpProblem {
        objective,
        rows,
        bounds,
        labels,
    })
}

fn extract_p2(prob: &LpProblem, point: &[f64], rate: f64) -> P2Solution {
    let mut usage: BTreeMap<(NodeId, NodeId), LinkUsage> = BTreeMap::new();
    for (j, label) in prob.labels.iter().enumerate() {
        match *label {
            VarLabel::Flow { tx, rx } => {
                usage
                    .entry((tx, rx))
                    .or_insert(LinkUsage {
                        tx,
                        rx,
                        flow: 0.0,
                        activation: 0.0,
                    })
                    .flow = point[j];
            }
            VarLabel::Activation { tx, rx } => {
                usage
                    .entry((tx, rx))
                    .or_insert(LinkUsage {
                        tx,
                        rx,
                        flow: 0.0,
                        activation: 0.0,
                    })
                    .activation = point[j];
            }
            VarLabel::PathUse(_) => {}
        }
    }
    P2Solution::new(usage.into_values().collect(), rate)
}

fn solve_p2_problem(prob: &LpProblem) -> Result<P2Solution, SolveError> {
    let sol = simplex::solve(prob)?;
    if sol.status != LpStatus::Optimal {
        return Err(SolveError::UnexpectedStatus { status: sol.status });
    }
    Ok(extract_p2(prob, &sol.point, sol.value))
}

/// Approximate capacity: the edge-based LP without thresholds.
pub fn approx_capacity(net: &Network) -> Result<P2Solution, SolveError> {
    solve_p2_problem(&build_p2(net, None)?)
}

/// Passive capacity: the edge-based LP with per-link activation
/// thresholds. The optimal activations double as a feasible beam
/// schedule for the thresholded network.
pub fn passive_capacity(
    net: &Network,
    thresholds: &ThresholdMap,
) -> Result<P2Solution, SolveError> {
    solve_p2_problem(&build_p2(net, Some(thresholds))?)
}

/// Best rate a fixed activation profile supports: maximize flow into
/// the destination subject to conservation, with each link's flow capped
/// at `λ ℓ`. Used to recompute the rate a beam schedule achieves.
pub fn flow_rate_for_activations(
    net: &Network,
    activations: &BTreeMap<(NodeId, NodeId), f64>,
) -> Result<f64, SolveError> {
    let links: Vec<_> = net.links().iter().filter(|l| l.capacity > 0.0).collect();
    let n_vars = links.len();
    let mut objective = vec![0.0; n_vars];
    let mut bounds = Vec::with_capacity(n_vars);
    let mut labels = Vec::with_capacity(n_vars);
    for (i, l) in links.iter().enumerate() {
        let lambda = activations.get(&(l.tx, l.rx)).copied().unwrap_or(0.0).max(0.0);
        bounds.push((0.0, lambda * l.capacity));
        labels.push(VarLabel::Flow { tx: l.tx, rx: l.rx });
        if l.rx == net.destination() {
            objective[i] = 1.0;
        }
    }
    let mut rows = Vec::new();
    for relay in 1..=net.n_relays() {
        let mut coeffs = vec![0.0; n_vars];
        let mut touched = false;
        for (i, l) in links.iter().enumerate() {
            if l.tx == relay {
                coeffs[i] += 1.0;
                touched = true;
            }
            if l.rx == relay {
                coeffs[i] -= 1.0;
                touched = true;
            }
        }
        if touched {
            rows.push(LpRow::new(
                format!("conserve_{relay}"),
                coeffs,
                Relation::Eq,
                0.0,
            ));
        }
    }
    let prob = LpProblem {
        objective,
        rows,
        bounds,
        labels,
    };
    let sol = simplex::solve(&prob)?;
    if sol.status != LpStatus::Optimal {
        return Err(SolveError::UnexpectedStatus { status: sol.status });
    }
    Ok(sol.value)
}

/// Solves the path-based LP and returns the activated paths.
pub fn solve_p1(
    net: &Network,
    paths: &[Path],
    thresholds: Option<&ThresholdMap>,
) -> Result<P1Solution, SolveError> {
    let prob = build_p1(net, paths, thresholds)?;
    let sol = simplex::solve(&prob)?;
    if sol.status != LpStatus::Optimal {
        return Err(SolveError::UnexpectedStatus { status: sol.status });
    }
    let terms = paths
        .iter()
        .zip(&sol.point)
        .filter(|(_, &x)| x > 0.0)
        .map(|(p, &x)| (p.clone(), x))
        .collect();
    Ok(P1Solution::new(terms))
}
