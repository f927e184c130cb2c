//! Edge- and vertex-disjoint path counting with extractable witnesses.
//!
//! Counts come from unit-capacity max-flow (BFS augmenting paths); the
//! vertex variant splits each relay into an in/out pair joined by a unit
//! arc. The witness paths are peeled from the integer flow, so a
//! certificate can always be re-verified without trusting the flow code.

use crate::builders::P2Solution;
use crate::model::{Link, Network, NodeId, Path};
use crate::FEAS_EPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisjointKind {
    EdgeDisjoint,
    VertexDisjoint,
}

/// A maximum disjoint-path family: the count plus explicit witness paths.
#[derive(Debug, Clone, PartialEq)]
pub struct DisjointPathCertificate {
    pub kind: DisjointKind,
    pub count: usize,
    pub witness: Vec<Path>,
}

impl DisjointPathCertificate {
    /// Re-checks the certificate against `net` from first principles:
    /// every witness path is valid, the paths are pairwise disjoint in
    /// the claimed sense, and the count matches.
    pub fn verify(&self, net: &Network) -> Result<(), String> {
        if self.count != self.witness.len() {
            return Err(format!(
                "count {} does not match witness size {}",
                self.count,
                self.witness.len()
            ));
        }
        for p in &self.witness {
            Path::new(net, p.nodes().to_vec()).map_err(|e| e.to_string())?;
        }
        for (i, a) in self.witness.iter().enumerate() {
            for b in self.witness.iter().skip(i + 1) {
                for link in a.links() {
                    if b.contains_link(link.0, link.1) {
                        return Err(format!("paths share link {}->{}", link.0, link.1));
                    }
                }
                if self.kind == DisjointKind::VertexDisjoint {
                    for &n in a.nodes() {
                        if n != net.source()
                            && n != net.destination()
                            && b.nodes().contains(&n)
                        {
                            return Err(format!("paths share interior node {n}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Maximum number of edge-disjoint source-destination paths (`H_e`).
pub fn count_edge_disjoint(net: &Network) -> DisjointPathCertificate {
    let mut g = FlowGraph::new(net.n_nodes());
    for l in usable_links(net) {
        g.add_edge(l.tx, l.rx);
    }
    let count = g.max_flow(net.source(), net.destination());
    let witness = g
        .peel_paths(net.source(), net.destination())
        .into_iter()
        .map(|nodes| Path::new(net, nodes).expect("flow paths use network links"))
        .collect();
    let cert = DisjointPathCertificate {
        kind: DisjointKind::EdgeDisjoint,
        count,
        witness,
    };
    debug_assert_eq!(cert.verify(net), Ok(()));
    cert
}

/// Maximum number of vertex-disjoint source-destination paths (`H_v`):
/// no shared links and no shared interior nodes.
pub fn count_vertex_disjoint(net: &Network) -> DisjointPathCertificate {
    // Split relay v into v_in = v and v_out = v + n_nodes.
    let n = net.n_nodes();
    let out_id = |v: NodeId| -> usize {
        if v == 0 {
            0
        } else {
            v + n
        }
    };
    let mut g = FlowGraph::new(2 * n);
    for relay in 1..=net.n_relays() {
        g.add_edge(relay, out_id(relay));
    }
    for l in usable_links(net) {
        g.add_edge(out_id(l.tx), l.rx);
    }
    let count = g.max_flow(net.source(), net.destination());
    let witness = g
        .peel_paths(net.source(), net.destination())
        .into_iter()
        .map(|nodes| {
            let collapsed: Vec<NodeId> = nodes.into_iter().filter(|&v| v < n).collect();
            Path::new(net, collapsed).expect("collapsed flow path uses network links")
        })
        .collect();
    let cert = DisjointPathCertificate {
        kind: DisjointKind::VertexDisjoint,
        count,
        witness,
    };
    debug_assert_eq!(cert.verify(net), Ok(()));
    cert
}

/// `H_e` of the subgraph of links an optimum actually activates
/// (activation above the feasibility tolerance).
pub fn active_edge_disjoint(sol: &P2Solution, net: &Network) -> usize {
    let links: Vec<Link> = net
        .links()
        .iter()
        .filter(|l| {
            l.capacity > 0.0
                && sol
                    .activation(l.tx, l.rx)
                    .map(|a| a > FEAS_EPS)
                    .unwrap_or(false)
        })
        .copied()
        .collect();
    let sub = Network::new(net.n_relays(), net.m_beams(), links);
    count_edge_disjoint(&sub).count
}

fn usable_links(net: &Network) -> impl Iterator<Item = &Link> {
    net.links().iter().filter(|l| l.capacity > 0.0)
}

/// Unit-capacity max-flow on a directed graph, Edmonds-Karp style.
struct FlowGraph {
    // edges[i] = (from, to); flow in {0, 1}; reverse edge is i ^ 1.
    edges: Vec<(usize, usize)>,
    flow: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl FlowGraph {
    fn new(n: usize) -> Self {
        Self {
            edges: Vec::new(),
            flow: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize) {
        let id = self.edges.len();
        self.edges.push((from, to));
        self.flow.push(0);
        self.adj[from].push(id);
        self.edges.push((to, from));
        self.flow.push(1); // residual of the reverse arc starts empty
        self.adj[to].push(id + 1);
    }

    fn residual(&self, e: usize) -> i32 {
        if e.is_multiple_of(2) {
            1 - self.flow[e]
        } else {
            self.flow[e - 1]
        }
    }

    fn push(&mut self, e: usize) {
        if e.is_multiple_of(2) {
            self.flow[e] += 1;
        } else {
            self.flow[e - 1] -= 1;
        }
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path.
            let mut pred: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(source);
            let mut seen = vec![false; self.adj.len()];
            seen[source] = true;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let (_, v) = self.edges[e];
                    if !seen[v] && self.residual(e) > 0 {
                        seen[v] = true;
                        pred[v] = Some(e);
                        if v == sink {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut v = sink;
            while v != source {
                let e = pred[v].expect("predecessor on augmenting path");
                self.push(e);
                v = self.edges[e].0;
            }
            total += 1;
        }
    }

    /// Splits the integer flow into node paths, smallest next node first.
    fn peel_paths(&mut self, source: usize, sink: usize) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        loop {
            let mut nodes = vec![source];
            let mut u = source;
            while u != sink {
                // Forward edges carry at most unit flow; pick the smallest
                // saturated receiver for determinism.
                let mut next: Option<(usize, usize)> = None;
                for &e in &self.adj[u] {
                    if e.is_multiple_of(2) && self.flow[e] > 0 {
                        let v = self.edges[e].1;
                        if next.map(|(_, nv)| v < nv).unwrap_or(true) {
                            next = Some((e, v));
                        }
                    }
                }
                let Some((e, v)) = next else {
                    return paths; // no outgoing flow left: done
                };
                self.flow[e] = 0;
                nodes.push(v);
                u = v;
            }
            paths.push(nodes);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{approx_capacity, passive_capacity};
    use crate::model::ThresholdMap;
    use crate::paths::enumerate_paths;
    use crate::testnet;
    use crate::topology::{generate_random, CapacityDist, TopologySpec};

    /// Exhaustive maximum disjoint-subset search over all enumerated
    /// paths; exponential, test-only.
    fn brute_force_max_disjoint(net: &Network, kind: DisjointKind) -> usize {
        let paths = enumerate_paths(net, 100_000).unwrap();
        let ps = paths.paths();
        let n = ps.len();
        let conflict: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            return false;
                        }
                        let share_link = ps[i].links().any(|(a, b)| ps[j].contains_link(a, b));
                        let share_node = ps[i].nodes().iter().any(|&v| {
                            v != net.source()
                                && v != net.destination()
                                && ps[j].nodes().contains(&v)
                        });
                        match kind {
                            DisjointKind::EdgeDisjoint => share_link,
                            DisjointKind::VertexDisjoint => share_link || share_node,
                        }
                    })
                    .collect()
            })
            .collect();
        fn rec(
            i: usize,
            chosen: &mut Vec<usize>,
            best: &mut usize,
            conflict: &[Vec<bool>],
        ) {
            let n = conflict.len();
            if chosen.len() + (n - i) <= *best {
                return;
            }
            if i == n {
                *best = (*best).max(chosen.len());
                return;
            }
            if chosen.iter().all(|&c| !conflict[c][i]) {
                chosen.push(i);
                rec(i + 1, chosen, best, conflict);
                chosen.pop();
            }
            rec(i + 1, chosen, best, conflict);
        }
        let mut best = 0;
        rec(0, &mut Vec::new(), &mut best, &conflict);
        best
    }

    #[test]
    fn fig1_has_five_disjoint_paths_both_kinds() {
        let net = testnet::fig1_unit();
        let e = count_edge_disjoint(&net);
        let v = count_vertex_disjoint(&net);
        assert_eq!(e.count, 5);
        assert_eq!(v.count, 5);
        assert_eq!(e.verify(&net), Ok(()));
        assert_eq!(v.verify(&net), Ok(()));
    }

    #[test]
    fn chain_has_one_disjoint_path() {
        let net = testnet::chain(&[1.0, 1.0]);
        assert_eq!(count_edge_disjoint(&net).count, 1);
        assert_eq!(count_vertex_disjoint(&net).count, 1);
    }

    #[test]
    fn diamond_distinguishes_edge_from_vertex() {
        // Two edge-disjoint paths through the shared head relay, but only
        // one vertex-disjoint path.
        let net = testnet::diamond(2.0, 1.0);
        assert_eq!(count_edge_disjoint(&net).count, 1); // head link is shared
        let mut links: Vec<Link> = net.links().to_vec();
        links.push(Link::new(0, 2, 1.0));
        let net2 = Network::validated(3, 1, links).unwrap();
        // Now 0->1->3->4 wait; recompute: 0->2 opens a second route.
        let e = count_edge_disjoint(&net2);
        let v = count_vertex_disjoint(&net2);
        assert_eq!(e.count, 2);
        assert_eq!(v.count, 2);
        assert_eq!(e.verify(&net2), Ok(()));
        assert_eq!(v.verify(&net2), Ok(()));
    }

    #[test]
    fn vertex_split_caps_shared_relays() {
        // Two paths forced through one middle relay: H_e = 2 via parallel
        // first hops is impossible here; construct explicitly.
        // 0 -> 1 -> 3, 0 -> 2 -> 3, both then 3 -> 4 -> 5? Simpler: hub.
        let links = vec![
            Link::new(0, 1, 1.0),
            Link::new(0, 2, 1.0),
            Link::new(1, 3, 1.0),
            Link::new(2, 3, 1.0),
            Link::new(3, 4, 1.0),
        ];
        let net = Network::validated(3, 1, links).unwrap();
        assert_eq!(count_edge_disjoint(&net).count, 1); // 3->4 is a cut
        assert_eq!(count_vertex_disjoint(&net).count, 1);
    }

    #[test]
    fn counts_match_exhaustive_search_on_random_dags() {
        let dist = CapacityDist::new(1.0, 0.0).unwrap();
        for seed in 0..12 {
            let net = generate_random(
                8,
                1,
                &TopologySpec::Layered {
                    layers: 3,
                    edge_prob: 0.5,
                },
                &dist,
                seed,
            )
            .unwrap();
            let he = count_edge_disjoint(&net);
            let hv = count_vertex_disjoint(&net);
            assert_eq!(
                he.count,
                brute_force_max_disjoint(&net, DisjointKind::EdgeDisjoint),
                "H_e mismatch at seed {seed}"
            );
            assert_eq!(
                hv.count,
                brute_force_max_disjoint(&net, DisjointKind::VertexDisjoint),
                "H_v mismatch at seed {seed}"
            );
            assert_eq!(he.verify(&net), Ok(()));
            assert_eq!(hv.verify(&net), Ok(()));
        }
    }

    #[test]
    fn menger_consistency_on_random_networks() {
        let dist = CapacityDist::new(1.0, 0.1).unwrap();
        for seed in 0..20 {
            let net = generate_random(
                7,
                1,
                &TopologySpec::Layered {
                    layers: 2,
                    edge_prob: 0.6,
                },
                &dist,
                seed,
            )
            .unwrap();
            let he = count_edge_disjoint(&net).count;
            let hv = count_vertex_disjoint(&net).count;
            let out_degree = net.out_links(0).filter(|l| l.capacity > 0.0).count();
            assert!(hv <= he, "H_v {hv} > H_e {he} at seed {seed}");
            assert!(he <= out_degree, "H_e {he} > outdeg {out_degree} at seed {seed}");
        }
    }

    #[test]
    fn active_subgraph_counts() {
        let net = testnet::fig1_example1();
        // Unconstrained optimum rides only the capacity-2 path.
        let sol = approx_capacity(&net).unwrap();
        assert_eq!(active_edge_disjoint(&sol, &net), 1);
        // Thresholded optimum spreads over all five paths.
        let t = ThresholdMap::uniform(&net, 0.2).unwrap();
        let sol = passive_capacity(&net, &t).unwrap();
        assert_eq!(active_edge_disjoint(&sol, &net), 5);
        // No activations at all.
        let t0 = ThresholdMap::uniform(&net, 0.0).unwrap();
        let sol0 = passive_capacity(&net, &t0).unwrap();
        assert_eq!(active_edge_disjoint(&sol0, &net), 0);
    }
}
