//! Beam schedules: explicit sequences of network states with durations.
//!
//! A state is a set of simultaneously active links respecting the beam
//! limits: each relay transmits on at most one link and receives on at
//! most one link, while the source (destination) may transmit (receive)
//! on up to `M`. [`schedule_from_activations`] turns the activation
//! variables of an edge-based optimum into such a schedule by peeling
//! partial matchings off the doubly-substochastic activation matrix.
//! [`edge_disjoint_schedule`] and [`vertex_disjoint_schedule`] build the
//! constructive time-sharing schedules over disjoint path families for
//! unit-capacity networks.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disjoint::{DisjointKind, DisjointPathCertificate};
use crate::model::{Network, NodeId};
use crate::{FEAS_EPS, RESIDUE_EPS};

/// A set of simultaneously active links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkState {
    links: Vec<(NodeId, NodeId)>,
}

impl NetworkState {
    pub fn new(mut links: Vec<(NodeId, NodeId)>) -> Self {
        links.sort_unstable();
        links.dedup();
        Self { links }
    }

    pub fn links(&self) -> &[(NodeId, NodeId)] {
        &self.links
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Beam-limit violations of this state: per-node transmit and
    /// receive counts against the limits implied by `m_beams`.
    pub fn beam_violations(
        &self,
        source: NodeId,
        destination: NodeId,
        m_beams: usize,
    ) -> Vec<String> {
        let mut out = Vec::new();
        let mut tx_count: BTreeMap<NodeId, usize> = BTreeMap::new();
        let mut rx_count: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &(tx, rx) in &self.links {
            *tx_count.entry(tx).or_default() += 1;
            *rx_count.entry(rx).or_default() += 1;
        }
        for (&node, &c) in &tx_count {
            let limit = if node == source { m_beams } else { 1 };
            if c > limit {
                out.push(format!("node {node} transmits on {c} links (limit {limit})"));
            }
        }
        for (&node, &c) in &rx_count {
            let limit = if node == destination { m_beams } else { 1 };
            if c > limit {
                out.push(format!("node {node} receives on {c} links (limit {limit})"));
            }
        }
        out
    }
}

/// One schedule entry.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledState {
    pub state: NetworkState,
    pub duration: f64,
}

/// A convex combination of network states; total duration at most one.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BeamSchedule {
    states: Vec<ScheduledState>,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    duration: f64,
    links: Vec<(NodeId, NodeId)>,
}

impl BeamSchedule {
    pub fn new(states: Vec<ScheduledState>) -> Self {
        Self { states }
    }

    pub fn states(&self) -> &[ScheduledState] {
        &self.states
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn total_duration(&self) -> f64 {
        self.states.iter().map(|s| s.duration).sum()
    }

    /// Per-link summed duration: the activation profile this schedule
    /// realizes.
    pub fn link_activation(&self) -> BTreeMap<(NodeId, NodeId), f64> {
        let mut map = BTreeMap::new();
        for s in &self.states {
            for &l in s.state.links() {
                *map.entry(l).or_insert(0.0) += s.duration;
            }
        }
        map
    }

    /// JSON dump: a list of `{"duration": f, "links": [[tx, rx], ...]}`.
    pub fn to_json(&self) -> Vec<u8> {
        let docs: Vec<StateDoc> = self
            .states
            .iter()
            .map(|s| StateDoc {
                duration: s.duration,
                links: s.state.links().to_vec(),
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&docs).expect("schedule serialization");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, serde_json::Error> {
        let docs: Vec<StateDoc> = serde_json::from_slice(bytes)?;
        Ok(Self::new(
            docs.into_iter()
                .map(|d| ScheduledState {
                    state: NetworkState::new(d.links),
                    duration: d.duration,
                })
                .collect(),
        ))
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScheduleError {
    #[error("activation schedules are defined for M = 1, got M = {m_beams}")]
    MultiBeamUnsupported { m_beams: usize },
    #[error("the multi-beam construction needs M > 1, got M = {m_beams}")]
    MultiBeamRequired { m_beams: usize },
    #[error("activation on unknown or zero-capacity link {tx}->{rx}")]
    UnknownLink { tx: NodeId, rx: NodeId },
    #[error("negative activation {activation} on link {tx}->{rx}")]
    NegativeActivation {
        tx: NodeId,
        rx: NodeId,
        activation: f64,
    },
    #[error("node {node} transmits for {sum} > 1")]
    NodeTransmitsTooLong { node: NodeId, sum: f64 },
    #[error("node {node} receives for {sum} > 1")]
    NodeReceivesTooLong { node: NodeId, sum: f64 },
    #[error("expected a {expected:?} certificate, got {got:?}")]
    WrongCertificateKind {
        expected: DisjointKind,
        got: DisjointKind,
    },
    #[error("certificate carries no paths")]
    EmptyCertificate,
    #[error("constructive schedules assume unit capacities; path capacity is {capacity}")]
    NonUnitCapacity { capacity: f64 },
    #[error("time fraction {value} outside [0, 1]")]
    InvalidFraction { value: f64 },
    #[error("numerical failure: {reason}")]
    NumericalFailure { reason: String },
}

type ActivationMap = BTreeMap<(NodeId, NodeId), f64>;

/// Decomposes a feasible activation map into a beam schedule whose
/// replay reproduces the map exactly (up to discarded dust below
/// [`RESIDUE_EPS`]).
///
/// Each peel takes a partial matching that covers every node currently
/// holding the maximum remaining transmit or receive load; the duration
/// is capped so no uncovered node can end up loaded beyond the covered
/// ones. Covering the heaviest nodes is what keeps the total duration at
/// the maximum node load (at most one); a greedy matching without the
/// cover property can overshoot the unit budget.
pub fn schedule_from_activations(
    net: &Network,
    activations: &ActivationMap,
) -> Result<BeamSchedule, ScheduleError> {
    if net.m_beams() != 1 {
        return Err(ScheduleError::MultiBeamUnsupported {
            m_beams: net.m_beams(),
        });
    }
    let mut residual: ActivationMap = BTreeMap::new();
    for (&(tx, rx), &a) in activations {
        if net.capacity(tx, rx).is_none_or(|c| c <= 0.0) {
            return Err(ScheduleError::UnknownLink { tx, rx });
        }
        if a < -FEAS_EPS {
            return Err(ScheduleError::NegativeActivation {
                tx,
                rx,
                activation: a,
            });
        }
        if a > RESIDUE_EPS {
            residual.insert((tx, rx), a);
        }
    }
    // Feasibility: per-node sums within the unit budget.
    let (tx_sums, rx_sums) = node_sums(&residual);
    for (&node, &s) in &tx_sums {
        if s > 1.0 + FEAS_EPS {
            return Err(ScheduleError::NodeTransmitsTooLong { node, sum: s });
        }
    }
    for (&node, &s) in &rx_sums {
        if s > 1.0 + FEAS_EPS {
            return Err(ScheduleError::NodeReceivesTooLong { node, sum: s });
        }
    }

    let mut states: Vec<ScheduledState> = Vec::new();
    loop {
        let (tx_sums, rx_sums) = node_sums(&residual);
        let load = tx_sums
            .values()
            .chain(rx_sums.values())
            .fold(0.0f64, |a, &b| a.max(b));
        if load <= RESIDUE_EPS {
            break;
        }
        let crit_tx: BTreeSet<NodeId> = tx_sums
            .iter()
            .filter(|(_, &s)| s >= load - RESIDUE_EPS)
            .map(|(&n, _)| n)
            .collect();
        let crit_rx: BTreeSet<NodeId> = rx_sums
            .iter()
            .filter(|(_, &s)| s >= load - RESIDUE_EPS)
            .map(|(&n, _)| n)
            .collect();

        let mut matching = critical_cover(&residual, &crit_tx, &crit_rx).ok_or_else(|| {
            ScheduleError::NumericalFailure {
                reason: "no matching covers the maximally loaded nodes".into(),
            }
        })?;

        // Extend to a maximal matching, heaviest links first.
        let mut by_weight: Vec<(&(NodeId, NodeId), &f64)> = residual.iter().collect();
        by_weight.sort_by(|a, b| {
            b.1.partial_cmp(a.1)
                .expect("activations are finite")
                .then(a.0.cmp(b.0))
        });
        let mut used_tx: BTreeSet<NodeId> = matching.iter().map(|&(tx, _)| tx).collect();
        let mut used_rx: BTreeSet<NodeId> = matching.iter().map(|&(_, rx)| rx).collect();
        for (&(tx, rx), _) in by_weight {
            if !used_tx.contains(&tx) && !used_rx.contains(&rx) {
                matching.push((tx, rx));
                used_tx.insert(tx);
                used_rx.insert(rx);
            }
        }
        matching.sort_unstable();

        // Cap the step so uncovered nodes never exceed the covered ones.
        let uncovered_load = tx_sums
            .iter()
            .filter(|(n, _)| !used_tx.contains(n))
            .map(|(_, &s)| s)
            .chain(
                rx_sums
                    .iter()
                    .filter(|(n, _)| !used_rx.contains(n))
                    .map(|(_, &s)| s),
            )
            .fold(0.0f64, |a, b| a.max(b));
        let cap = load - uncovered_load;
        let min_in_matching = matching
            .iter()
            .map(|l| residual[l])
            .fold(f64::INFINITY, f64::min);
        let step = min_in_matching.min(cap);
        if step <= RESIDUE_EPS {
            if load <= FEAS_EPS {
                break; // only dust left; per-link residue stays in tolerance
            }
            return Err(ScheduleError::NumericalFailure {
                reason: format!("peeling stalled at load {load}"),
            });
        }
        for l in &matching {
            let v = residual.get_mut(l).expect("matched link in residual");
            *v -= step;
            if *v < RESIDUE_EPS {
                residual.remove(l);
            }
        }
        states.push(ScheduledState {
            state: NetworkState::new(matching),
            duration: step,
        });
    }

    Ok(BeamSchedule::new(merge_identical(states)))
}

fn node_sums(map: &ActivationMap) -> (BTreeMap<NodeId, f64>, BTreeMap<NodeId, f64>) {
    let mut tx: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut rx: BTreeMap<NodeId, f64> = BTreeMap::new();
    for (&(t, r), &a) in map {
        *tx.entry(t).or_default() += a;
        *rx.entry(r).or_default() += a;
    }
    (tx, rx)
}

/// Folds repeated link sets into one state each, keeping first-seen order.
fn merge_identical(states: Vec<ScheduledState>) -> Vec<ScheduledState> {
    let mut order: Vec<Vec<(NodeId, NodeId)>> = Vec::new();
    let mut merged: BTreeMap<Vec<(NodeId, NodeId)>, f64> = BTreeMap::new();
    for s in states {
        let key = s.state.links().to_vec();
        if !merged.contains_key(&key) {
            order.push(key.clone());
        }
        *merged.entry(key).or_insert(0.0) += s.duration;
    }
    order
        .into_iter()
        .map(|key| {
            let duration = merged[&key];
            ScheduledState {
                state: NetworkState::new(key),
                duration,
            }
        })
        .collect()
}

/// A matching in the support that covers every node in `crit_tx` and
/// `crit_rx`. Found by saturating each side separately and merging the
/// two matchings component-wise; a matching saturating the maximally
/// loaded side always exists because those nodes carry the full load.
fn critical_cover(
    residual: &ActivationMap,
    crit_tx: &BTreeSet<NodeId>,
    crit_rx: &BTreeSet<NodeId>,
) -> Option<Vec<(NodeId, NodeId)>> {
    // Adjacency over the support.
    let mut tx_adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    let mut rx_adj: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(tx, rx) in residual.keys() {
        tx_adj.entry(tx).or_default().push(rx);
        rx_adj.entry(rx).or_default().push(tx);
    }

    // m1 saturates crit_tx (tx -> rx), m2 saturates crit_rx (rx -> tx).
    let m1 = saturating_matching(crit_tx, &tx_adj)?;
    let m2_rev = saturating_matching(crit_rx, &rx_adj)?;
    let m2: BTreeMap<NodeId, NodeId> = m2_rev.iter().map(|(&rx, &tx)| (tx, rx)).collect();

    // Merge component-wise. Components of the union of two matchings are
    // alternating paths or cycles; one side's restriction always covers
    // the component's critical nodes.
    let mut edges: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    edges.extend(m1.iter().map(|(&a, &b)| (a, b)));
    edges.extend(m2.iter().map(|(&a, &b)| (a, b)));

    let mut visited: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    let mut chosen: Vec<(NodeId, NodeId)> = Vec::new();
    for &start in &edges {
        if visited.contains(&start) {
            continue;
        }
        // Flood the component through shared endpoints.
        let mut comp: Vec<(NodeId, NodeId)> = Vec::new();
        let mut stack = vec![start];
        visited.insert(start);
        while let Some(e) = stack.pop() {
            comp.push(e);
            for &other in &edges {
                if !visited.contains(&other) && (other.0 == e.0 || other.1 == e.1) {
                    visited.insert(other);
                    stack.push(other);
                }
            }
        }
        let s1: Vec<(NodeId, NodeId)> = comp
            .iter()
            .filter(|&&(a, b)| m1.get(&a) == Some(&b))
            .copied()
            .collect();
        let s2: Vec<(NodeId, NodeId)> = comp
            .iter()
            .filter(|&&(a, b)| m2.get(&a) == Some(&b))
            .copied()
            .collect();
        let covers = |s: &[(NodeId, NodeId)]| -> bool {
            let ctx: BTreeSet<NodeId> = s.iter().map(|&(a, _)| a).collect();
            let crx: BTreeSet<NodeId> = s.iter().map(|&(_, b)| b).collect();
            comp.iter().all(|&(a, b)| {
                (!crit_tx.contains(&a) || ctx.contains(&a))
                    && (!crit_rx.contains(&b) || crx.contains(&b))
            })
        };
        if covers(&s1) {
            chosen.extend(s1);
        } else {
            debug_assert!(covers(&s2), "one side must cover the component");
            chosen.extend(s2);
        }
    }
    Some(chosen)
}

/// Kuhn's augmenting-path matching; returns a left-to-right assignment
/// saturating `left`, or `None` when some left node cannot be matched.
fn saturating_matching(
    left: &BTreeSet<NodeId>,
    adj: &BTreeMap<NodeId, Vec<NodeId>>,
) -> Option<BTreeMap<NodeId, NodeId>> {
    fn try_assign(
        u: NodeId,
        adj: &BTreeMap<NodeId, Vec<NodeId>>,
        owner: &mut BTreeMap<NodeId, NodeId>,
        seen: &mut BTreeSet<NodeId>,
    ) -> bool {
        let Some(neighbors) = adj.get(&u) else {
            return false;
        };
        for &v in neighbors {
            if seen.insert(v) {
                let free = match owner.get(&v) {
                    None => true,
                    Some(&w) => try_assign(w, adj, owner, seen),
                };
                if free {
                    owner.insert(v, u);
                    return true;
                }
            }
        }
        false
    }

    let mut owner: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    for &u in left {
        let mut seen = BTreeSet::new();
        if !try_assign(u, adj, &mut owner, &mut seen) {
            return None;
        }
    }
    Some(owner.into_iter().map(|(v, u)| (u, v)).collect())
}

/// Equal time sharing over an edge-disjoint path family: every path runs
/// for `gamma = theta_c * cbar / H_e`. On a unit-capacity network this
/// achieves the rate `theta_c * cbar`. When `gamma` exceeds `theta` the
/// schedule violates the per-link threshold; that is reported, not fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDisjointSchedule {
    pub schedule: BeamSchedule,
    pub gamma: f64,
    pub rate: f64,
    pub threshold_ok: bool,
}

pub fn edge_disjoint_schedule(
    cert: &DisjointPathCertificate,
    theta_c: f64,
    cbar: f64,
    theta: f64,
) -> Result<EdgeDisjointSchedule, ScheduleError> {
    if cert.kind != DisjointKind::EdgeDisjoint {
        return Err(ScheduleError::WrongCertificateKind {
            expected: DisjointKind::EdgeDisjoint,
            got: cert.kind,
        });
    }
    if cert.count == 0 {
        return Err(ScheduleError::EmptyCertificate);
    }
    if !(0.0..=1.0).contains(&theta_c) {
        return Err(ScheduleError::InvalidFraction { value: theta_c });
    }
    check_unit_paths(cert)?;

    let h_e = cert.count as f64;
    let gamma = theta_c * cbar / h_e;
    let states = if gamma > 0.0 {
        cert.witness
            .iter()
            .map(|p| ScheduledState {
                state: NetworkState::new(p.links().collect()),
                duration: gamma,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(EdgeDisjointSchedule {
        schedule: BeamSchedule::new(states),
        gamma,
        rate: theta_c * cbar,
        threshold_ok: gamma <= theta + 1e-12,
    })
}

/// The multi-beam construction over a vertex-disjoint path family.
///
/// With `M` source/destination beams, `cbar = min(M, H_v)` paths run
/// concurrently in each of `max(M, H_v)` states, assigned round-robin so
/// every path appears in exactly `M` states of duration
/// `lambda_s = gamma / M` with `gamma = theta_c * cbar / H_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexDisjointSchedule {
    pub schedule: BeamSchedule,
    pub gamma: f64,
    pub lambda_s: f64,
    pub cbar: f64,
    pub rate: f64,
}

pub fn vertex_disjoint_schedule(
    cert: &DisjointPathCertificate,
    m_beams: usize,
    theta_c: f64,
) -> Result<VertexDisjointSchedule, ScheduleError> {
    if cert.kind != DisjointKind::VertexDisjoint {
        return Err(ScheduleError::WrongCertificateKind {
            expected: DisjointKind::VertexDisjoint,
            got: cert.kind,
        });
    }
    if m_beams <= 1 {
        return Err(ScheduleError::MultiBeamRequired { m_beams });
    }
    if cert.count == 0 {
        return Err(ScheduleError::EmptyCertificate);
    }
    if !(0.0..=1.0).contains(&theta_c) {
        return Err(ScheduleError::InvalidFraction { value: theta_c });
    }
    check_unit_paths(cert)?;

    let h_v = cert.count;
    let m_hat = m_beams.min(h_v);
    let cbar = m_hat as f64;
    let gamma = theta_c * cbar / h_v as f64;
    let lambda_s = gamma / m_beams as f64;
    let n_states = m_beams.max(h_v);

    let states: Vec<ScheduledState> = if lambda_s > 0.0 {
        (0..n_states)
            .map(|t| {
                let mut links = Vec::new();
                for i in 0..m_hat {
                    let p = &cert.witness[(t + i) % h_v];
                    links.extend(p.links());
                }
                ScheduledState {
                    state: NetworkState::new(links),
                    duration: lambda_s,
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let rate = cbar * lambda_s * n_states as f64;
    Ok(VertexDisjointSchedule {
        schedule: BeamSchedule::new(states),
        gamma,
        lambda_s,
        cbar,
        rate,
    })
}

fn check_unit_paths(cert: &DisjointPathCertificate) -> Result<(), ScheduleError> {
    for p in &cert.witness {
        if (p.capacity() - 1.0).abs() > 1e-9 {
            return Err(ScheduleError::NonUnitCapacity {
                capacity: p.capacity(),
            });
        }
    }
    Ok(())
}
