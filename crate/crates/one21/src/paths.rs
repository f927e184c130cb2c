//! Path enumeration and decomposition of edge-based optima into
//! weighted paths.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::builders::{P1Solution, P2Solution};
use crate::model::{Network, NodeId, Path};
use crate::{FEAS_EPS, RESIDUE_EPS};

type FlowMap = BTreeMap<(NodeId, NodeId), f64>;

/// A set of simple source-to-destination paths. `complete` marks
/// exhaustive enumeration, as opposed to a caller-chosen subset.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    paths: Vec<Path>,
    complete: bool,
}

impl PathSet {
    pub fn new(paths: Vec<Path>, complete: bool) -> Self {
        Self { paths, complete }
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PathsError {
    #[error("more than {limit} source-destination paths; raise the limit or use the edge-based LP")]
    TooManyPaths { limit: usize },
    #[error("path limit must be at least 1")]
    ZeroLimit,
}

/// Enumerates every simple source-to-destination path over links with
/// positive capacity, in lexicographic node order. Fails once the count
/// would exceed `limit`.
pub fn enumerate_paths(net: &Network, limit: usize) -> Result<PathSet, PathsError> {
    if limit == 0 {
        return Err(PathsError::ZeroLimit);
    }
    let dest = net.destination();
    let mut paths = Vec::new();
    let mut stack: Vec<NodeId> = vec![net.source()];
    let mut on_stack = vec![false; net.n_nodes()];
    on_stack[net.source()] = true;

    // Iterative DFS; out_links are receiver-sorted, so paths come out in
    // lexicographic order.
    fn dfs(
        net: &Network,
        node: NodeId,
        dest: NodeId,
        stack: &mut Vec<NodeId>,
        on_stack: &mut [bool],
        paths: &mut Vec<Path>,
        limit: usize,
    ) -> Result<(), PathsError> {
        if node == dest {
            if paths.len() == limit {
                return Err(PathsError::TooManyPaths { limit });
            }
            paths.push(Path::new(net, stack.clone()).expect("stack is a valid path"));
            return Ok(());
        }
        let next: Vec<NodeId> = net
            .out_links(node)
            .filter(|l| l.capacity > 0.0 && !on_stack[l.rx])
            .map(|l| l.rx)
            .collect();
        for rx in next {
            stack.push(rx);
            on_stack[rx] = true;
            let r = dfs(net, rx, dest, stack, on_stack, paths, limit);
            stack.pop();
            on_stack[rx] = false;
            r?;
        }
        Ok(())
    }

    dfs(
        net,
        net.source(),
        dest,
        &mut stack,
        &mut on_stack,
        &mut paths,
        limit,
    )?;
    Ok(PathSet::new(paths, true))
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DecomposeError {
    #[error("flow conservation violated at relay {relay} by {imbalance}")]
    ConservationViolated { relay: NodeId, imbalance: f64 },
    #[error("decomposed rate {got} differs from the LP rate {want}")]
    RateMismatch { got: f64, want: f64 },
    #[error("path flow on {tx}->{rx} implies activation {implied} > scheduled {scheduled}")]
    ActivationExceeded {
        tx: NodeId,
        rx: NodeId,
        implied: f64,
        scheduled: f64,
    },
    #[error("no source-destination path left in the flow support")]
    Stalled,
}

/// Decomposes an edge-based optimum into weighted paths: repeatedly peel
/// the path of maximum bottleneck flow (ties broken by lexicographically
/// smallest node sequence) with `x_p = F_p / C_p`. Zero-contribution
/// cycles in the flow are cancelled first so peeling runs on a DAG.
pub fn decompose_flow(sol: &P2Solution, net: &Network) -> Result<P1Solution, DecomposeError> {
    let mut flow: FlowMap = sol
        .per_link()
        .iter()
        .filter(|u| u.flow > RESIDUE_EPS)
        .map(|u| ((u.tx, u.rx), u.flow))
        .collect();

    let tol = 1e-6 * (1.0 + sol.rate().abs());
    for relay in 1..=net.n_relays() {
        let out: f64 = flow
            .iter()
            .filter(|(&(tx, _), _)| tx == relay)
            .map(|(_, &f)| f)
            .sum();
        let inn: f64 = flow
            .iter()
            .filter(|(&(_, rx), _)| rx == relay)
            .map(|(_, &f)| f)
            .sum();
        if (out - inn).abs() > tol {
            return Err(DecomposeError::ConservationViolated {
                relay,
                imbalance: out - inn,
            });
        }
    }

    cancel_cycles(&mut flow, net.n_nodes());

    let mut terms: Vec<(Path, f64)> = Vec::new();
    let source = net.source();
    let dest = net.destination();
    loop {
        let out_of_source: f64 = flow
            .iter()
            .filter(|(&(tx, _), _)| tx == source)
            .map(|(_, &f)| f)
            .sum();
        if out_of_source <= RESIDUE_EPS * (1.0 + sol.rate().abs()) {
            break;
        }
        let bottleneck =
            max_bottleneck(&flow, source, dest, net.n_nodes()).ok_or(DecomposeError::Stalled)?;
        let nodes = lex_smallest_path(&flow, source, dest, net.n_nodes(), bottleneck)
            .ok_or(DecomposeError::Stalled)?;
        let path = Path::new(net, nodes).expect("flow support uses existing links");
        for (tx, rx) in path.links() {
            let f = flow.get_mut(&(tx, rx)).expect("edge in support");
            *f -= bottleneck;
            if *f < RESIDUE_EPS {
                flow.remove(&(tx, rx));
            }
        }
        terms.push((path, bottleneck));
    }

    // Convert peeled flow to path activation: x_p = F_p / C_p.
    let terms: Vec<(Path, f64)> = terms
        .into_iter()
        .map(|(p, f)| {
            let x = f / p.capacity();
            (p, x)
        })
        .collect();
    let result = P1Solution::new(terms);

    let got = result.rate();
    if (got - sol.rate()).abs() > 1e-6 * (1.0 + sol.rate().abs()) {
        return Err(DecomposeError::RateMismatch {
            got,
            want: sol.rate(),
        });
    }
    for (&(tx, rx), &implied) in &result.link_activations(net) {
        let scheduled = sol.activation(tx, rx).unwrap_or(0.0);
        if implied > scheduled + FEAS_EPS {
            return Err(DecomposeError::ActivationExceeded {
                tx,
                rx,
                implied,
                scheduled,
            });
        }
    }
    Ok(result)
}

/// Removes circulation cycles from the flow support by subtracting the
/// minimum flow around each cycle found.
fn cancel_cycles(flow: &mut FlowMap, n_nodes: usize) {
    loop {
        let Some(cycle) = find_cycle(flow, n_nodes) else {
            return;
        };
        let m = cycle
            .iter()
            .map(|e| flow[e])
            .fold(f64::INFINITY, f64::min);
        for e in cycle {
            let f = flow.get_mut(&e).expect("cycle edge in support");
            *f -= m;
            if *f < RESIDUE_EPS {
                flow.remove(&e);
            }
        }
    }
}

/// One cycle of the support as an edge list, or `None`. Deterministic:
/// DFS from the smallest node, visiting smallest receivers first.
fn find_cycle(flow: &FlowMap, n_nodes: usize) -> Option<Vec<(NodeId, NodeId)>> {
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n_nodes];
    for &(tx, rx) in flow.keys() {
        adj[tx].push(rx); // BTreeMap order keeps receivers sorted
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; n_nodes];
    let mut parent_pos: Vec<(NodeId, usize)> = Vec::new();

    for start in 0..n_nodes {
        if mark[start] != Mark::New {
            continue;
        }
        parent_pos.clear();
        parent_pos.push((start, 0));
        mark[start] = Mark::Active;
        while let Some(&(node, pos)) = parent_pos.last() {
            if pos < adj[node].len() {
                parent_pos.last_mut().unwrap().1 += 1;
                let next = adj[node][pos];
                match mark[next] {
                    Mark::Active => {
                        // Unwind the stack back to `next` to emit the cycle.
                        let from = parent_pos
                            .iter()
                            .position(|&(n, _)| n == next)
                            .expect("active node is on the stack");
                        let mut edges: Vec<(NodeId, NodeId)> = parent_pos[from..]
                            .windows(2)
                            .map(|w| (w[0].0, w[1].0))
                            .collect();
                        edges.push((node, next));
                        return Some(edges);
                    }
                    Mark::New => {
                        mark[next] = Mark::Active;
                        parent_pos.push((next, 0));
                    }
                    Mark::Done => {}
                }
            } else {
                mark[node] = Mark::Done;
                parent_pos.pop();
            }
        }
    }
    None
}

fn reachable(
    flow: &FlowMap,
    source: NodeId,
    dest: NodeId,
    n_nodes: usize,
    min_flow: f64,
) -> bool {
    let mut seen = vec![false; n_nodes];
    seen[source] = true;
    let mut queue = vec![source];
    while let Some(u) = queue.pop() {
        if u == dest {
            return true;
        }
        for (&(tx, rx), &f) in flow.iter() {
            if tx == u && f >= min_flow && !seen[rx] {
                seen[rx] = true;
                queue.push(rx);
            }
        }
    }
    false
}

/// Largest bottleneck value over source-destination paths in the flow
/// support: the biggest edge value `v` such that the destination stays
/// reachable using only edges with flow `>= v`.
fn max_bottleneck(
    flow: &FlowMap,
    source: NodeId,
    dest: NodeId,
    n_nodes: usize,
) -> Option<f64> {
    let mut values: Vec<f64> = flow.values().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("flows are finite"));
    values.dedup();
    // Reachability is monotone in the threshold, so binary search works.
    let mut lo = 0usize; // largest index known unreachable + ... candidates grow downward
    let mut best: Option<f64> = None;
    let mut hi = values.len();
    while lo < hi {
        let mid = (lo + hi) / 2;
        if reachable(flow, source, dest, n_nodes, values[mid]) {
            best = Some(values[mid]);
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    best
}

/// Lexicographically smallest node sequence from source to destination
/// using only edges with flow `>= min_flow`. The support is acyclic here
/// (cycles cancelled), so greedy next-hop selection with a reachability
/// check is sound.
fn lex_smallest_path(
    flow: &FlowMap,
    source: NodeId,
    dest: NodeId,
    n_nodes: usize,
    min_flow: f64,
) -> Option<Vec<NodeId>> {
    let mut nodes = vec![source];
    let mut current = source;
    while current != dest {
        let mut advanced = false;
        for (&(tx, rx), &f) in flow.iter() {
            if tx == current && f >= min_flow && reachable(flow, rx, dest, n_nodes, min_flow) {
                nodes.push(rx);
                current = rx;
                advanced = true;
                break; // BTreeMap order: smallest rx first
            }
        }
        if !advanced {
            return None;
        }
        if nodes.len() > n_nodes {
            return None;
        }
    }
    Some(nodes)
}
