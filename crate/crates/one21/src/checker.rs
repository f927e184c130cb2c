//! Independent feasibility checker for path-activation certificates.
//!
//! Recomputes every quantity from the raw network and path structure:
//! path capacities, per-node transmit/receive budgets, and per-link
//! activations against thresholds. It deliberately shares no code with
//! the LP builders or the solution types, so a certificate check cannot
//! inherit a builder bug.

use std::collections::BTreeMap;

use crate::model::{Network, NodeId, Path, ThresholdMap};

/// Violations found in a path-activation certificate; empty means the
/// certificate is feasible within `eps`. The time budget is one unit per
/// node, except that `m_beams` source antennas (destination antennas)
/// lift the source transmit (destination receive) budget to `m_beams`.
pub fn check_path_activations(
    net: &Network,
    thresholds: Option<&ThresholdMap>,
    terms: &[(Path, f64)],
    m_beams: usize,
    eps: f64,
) -> Vec<String> {
    let mut out = Vec::new();
    let mut tx_usage: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut rx_usage: BTreeMap<NodeId, f64> = BTreeMap::new();
    let mut link_activation: BTreeMap<(NodeId, NodeId), f64> = BTreeMap::new();

    for (idx, (path, x)) in terms.iter().enumerate() {
        if *x < -eps {
            out.push(format!("path {idx} has negative activation {x}"));
        }
        let nodes = path.nodes();
        if nodes.first() != Some(&net.source()) || nodes.last() != Some(&net.destination()) {
            out.push(format!("path {idx} does not run source to destination"));
            continue;
        }
        // Recompute the path capacity from raw link data.
        let mut cap = f64::INFINITY;
        let mut ok = true;
        for w in nodes.windows(2) {
            match net.capacity(w[0], w[1]) {
                Some(c) if c > 0.0 => cap = cap.min(c),
                _ => {
                    out.push(format!("path {idx} uses unusable link {}->{}", w[0], w[1]));
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        for w in nodes.windows(2) {
            let (tx, rx) = (w[0], w[1]);
            let link_cap = net.capacity(tx, rx).expect("checked above");
            let fraction = x * cap / link_cap;
            *tx_usage.entry(tx).or_default() += fraction;
            *rx_usage.entry(rx).or_default() += fraction;
            *link_activation.entry((tx, rx)).or_default() += fraction;
        }
    }

    for (&node, &u) in &tx_usage {
        let budget = if node == net.source() { m_beams as f64 } else { 1.0 };
        if u > budget + eps {
            out.push(format!("node {node} transmit budget exceeded: {u}"));
        }
    }
    for (&node, &u) in &rx_usage {
        let budget = if node == net.destination() { m_beams as f64 } else { 1.0 };
        if u > budget + eps {
            out.push(format!("node {node} receive budget exceeded: {u}"));
        }
    }
    if let Some(t) = thresholds {
        for (&(tx, rx), &a) in &link_activation {
            let theta = t.get(tx, rx).unwrap_or(1.0);
            if a > theta + eps {
                out.push(format!(
                    "link {tx}->{rx} activation {a} exceeds threshold {theta}"
                ));
            }
        }
    }
    out
}
