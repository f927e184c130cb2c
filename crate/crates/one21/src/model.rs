//! Static network model: nodes, links, activation thresholds, and paths.
//!
//! Nodes are dense integer ids. Node `0` is the source, nodes `1..=N` are
//! relays, and node `N+1` is the destination; source and destination are
//! fixed by position, not configurable. Links are directed and carry a
//! nonnegative capacity `ℓ` in rate units.
//!
//! Path capacity. A path's capacity `C_p` is the minimum link capacity
//! along it. Rationale: when a path is operated alone at full activation,
//! each of its links must be active for the fraction `C_p / ℓ` of time,
//! which stays within the unit time budget exactly when `C_p` does not
//! exceed any link capacity on the path; the minimum is achievable by
//! activating every link for that fraction.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Dense node identifier. `0` is the source; `n_relays + 1` the destination.
pub type NodeId = usize;

/// A directed link with capacity in rate units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub tx: NodeId,
    pub rx: NodeId,
    pub capacity: f64,
}

impl Link {
    pub fn new(tx: NodeId, rx: NodeId, capacity: f64) -> Self {
        Self { tx, rx, capacity }
    }
}

/// A full-duplex 1-2-1 relay network.
///
/// Construction never fails; call [`Network::validate`] to collect
/// invariant violations (they are data, not panics), or use
/// [`Network::validated`] when a violation should be an error.
#[derive(Debug, Clone)]
pub struct Network {
    n_relays: usize,
    m_beams: usize,
    links: Vec<Link>,
    // Adjacency as indices into `links`; only in-range endpoints appear.
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.n_relays == other.n_relays
            && self.m_beams == other.m_beams
            && self.links == other.links
    }
}

/// One invariant violation found by [`Network::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationIssue {
    LinkIntoSource { tx: NodeId, rx: NodeId },
    LinkOutOfDestination { tx: NodeId, rx: NodeId },
    SelfLoop { node: NodeId },
    NodeOutOfRange { tx: NodeId, rx: NodeId },
    DuplicateLink { tx: NodeId, rx: NodeId },
    NegativeCapacity { tx: NodeId, rx: NodeId, capacity: f64 },
    NonFiniteCapacity { tx: NodeId, rx: NodeId },
    InvalidBeamCount { m_beams: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LinkIntoSource { tx, rx } => {
                write!(f, "link into source: {tx}->{rx}")
            }
            Self::LinkOutOfDestination { tx, rx } => {
                write!(f, "link out of destination: {tx}->{rx}")
            }
            Self::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            Self::NodeOutOfRange { tx, rx } => {
                write!(f, "link endpoint out of range: {tx}->{rx}")
            }
            Self::DuplicateLink { tx, rx } => {
                write!(f, "duplicate link {tx}->{rx}")
            }
            Self::NegativeCapacity { tx, rx, capacity } => {
                write!(f, "negative capacity {capacity} on link {tx}->{rx}")
            }
            Self::NonFiniteCapacity { tx, rx } => {
                write!(f, "non-finite capacity on link {tx}->{rx}")
            }
            Self::InvalidBeamCount { m_beams } => {
                write!(f, "beam count must be >= 1, got {m_beams}")
            }
        }
    }
}

/// Error wrapper carrying every violation of an invalid network.
#[derive(Debug, Clone, Error, PartialEq)]
#[error("invalid network: {}", issues.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub issues: Vec<ValidationIssue>,
}

impl Network {
    /// Builds a network, sorting links by `(tx, rx)`. Invalid links are
    /// kept so that [`Network::validate`] can report them.
    pub fn new(n_relays: usize, m_beams: usize, mut links: Vec<Link>) -> Self {
        links.sort_by_key(|l| (l.tx, l.rx));
        let n_nodes = n_relays + 2;
        let mut out_adj = vec![Vec::new(); n_nodes];
        let mut in_adj = vec![Vec::new(); n_nodes];
        for (idx, l) in links.iter().enumerate() {
            if l.tx < n_nodes && l.rx < n_nodes {
                out_adj[l.tx].push(idx);
                in_adj[l.rx].push(idx);
            }
        }
        Self {
            n_relays,
            m_beams,
            links,
            out_adj,
            in_adj,
        }
    }

    /// Builds and validates in one step.
    pub fn validated(
        n_relays: usize,
        m_beams: usize,
        links: Vec<Link>,
    ) -> Result<Self, ValidationError> {
        let net = Self::new(n_relays, m_beams, links);
        let issues = net.validate();
        if issues.is_empty() {
            Ok(net)
        } else {
            Err(ValidationError { issues })
        }
    }

    /// Collects every invariant violation; an empty list means valid.
    pub fn validate(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        if self.m_beams == 0 {
            issues.push(ValidationIssue::InvalidBeamCount {
                m_beams: self.m_beams,
            });
        }
        let dest = self.destination();
        for (i, l) in self.links.iter().enumerate() {
            if l.tx == l.rx {
                issues.push(ValidationIssue::SelfLoop { node: l.tx });
            }
            if l.rx == 0 {
                issues.push(ValidationIssue::LinkIntoSource { tx: l.tx, rx: l.rx });
            }
            if l.tx == dest {
                issues.push(ValidationIssue::LinkOutOfDestination { tx: l.tx, rx: l.rx });
            }
            if l.tx > dest || l.rx > dest {
                issues.push(ValidationIssue::NodeOutOfRange { tx: l.tx, rx: l.rx });
            }
            if !l.capacity.is_finite() {
                issues.push(ValidationIssue::NonFiniteCapacity { tx: l.tx, rx: l.rx });
            } else if l.capacity < 0.0 {
                issues.push(ValidationIssue::NegativeCapacity {
                    tx: l.tx,
                    rx: l.rx,
                    capacity: l.capacity,
                });
            }
            // Links are sorted, so duplicates are adjacent.
            if i > 0 {
                let prev = &self.links[i - 1];
                if (prev.tx, prev.rx) == (l.tx, l.rx) {
                    issues.push(ValidationIssue::DuplicateLink { tx: l.tx, rx: l.rx });
                }
            }
        }
        issues
    }

    pub fn n_relays(&self) -> usize {
        self.n_relays
    }

    pub fn m_beams(&self) -> usize {
        self.m_beams
    }

    pub fn n_nodes(&self) -> usize {
        self.n_relays + 2
    }

    pub fn source(&self) -> NodeId {
        0
    }

    pub fn destination(&self) -> NodeId {
        self.n_relays + 1
    }

    /// Links sorted by `(tx, rx)`.
    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, tx: NodeId, rx: NodeId) -> Option<&Link> {
        self.links
            .binary_search_by(|l| (l.tx, l.rx).cmp(&(tx, rx)))
            .ok()
            .map(|i| &self.links[i])
    }

    pub fn capacity(&self, tx: NodeId, rx: NodeId) -> Option<f64> {
        self.link(tx, rx).map(|l| l.capacity)
    }

    /// Outgoing links of `node`, in receiver order.
    pub fn out_links(&self, node: NodeId) -> impl Iterator<Item = &Link> {
        self.out_adj
            .get(node)
            .into_iter()
            .flatten()
            .map(move |&i| &self.links[i])
    }

    /// Incoming links of `node`, in transmitter order.
    pub fn in_links(&self, node: NodeId) -> impl Iterator<Item = &Link> {
        self.in_adj
            .get(node)
            .into_iter()
            .flatten()
            .map(move |&i| &self.links[i])
    }

    /// Same topology with capacities replaced positionally (link order).
    pub fn with_capacities(&self, capacities: &[f64]) -> Self {
        assert_eq!(capacities.len(), self.links.len());
        let links = self
            .links
            .iter()
            .zip(capacities)
            .map(|(l, &c)| Link::new(l.tx, l.rx, c))
            .collect();
        Self::new(self.n_relays, self.m_beams, links)
    }

    /// Same network with a different beam count.
    pub fn with_m_beams(&self, m_beams: usize) -> Self {
        let mut net = self.clone();
        net.m_beams = m_beams;
        net
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ThresholdError {
    #[error("threshold {theta} out of [0, 1]")]
    OutOfRange { theta: f64 },
    #[error("threshold domain does not match the link set at {tx}->{rx}")]
    DomainMismatch { tx: NodeId, rx: NodeId },
}

/// Per-link activation-time thresholds `θ` in `[0, 1]`.
///
/// The domain always equals the network's link set; construction fails
/// otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdMap {
    values: BTreeMap<(NodeId, NodeId), f64>,
}

impl ThresholdMap {
    /// Uniform threshold `theta` on every link.
    pub fn uniform(net: &Network, theta: f64) -> Result<Self, ThresholdError> {
        if !(0.0..=1.0).contains(&theta) || !theta.is_finite() {
            return Err(ThresholdError::OutOfRange { theta });
        }
        let values = net
            .links()
            .iter()
            .map(|l| ((l.tx, l.rx), theta))
            .collect();
        Ok(Self { values })
    }

    /// Per-link thresholds; the map must cover exactly the link set.
    pub fn from_values(
        net: &Network,
        values: BTreeMap<(NodeId, NodeId), f64>,
    ) -> Result<Self, ThresholdError> {
        for (&(tx, rx), &theta) in &values {
            if !(0.0..=1.0).contains(&theta) || !theta.is_finite() {
                return Err(ThresholdError::OutOfRange { theta });
            }
            if net.link(tx, rx).is_none() {
                return Err(ThresholdError::DomainMismatch { tx, rx });
            }
        }
        for l in net.links() {
            if !values.contains_key(&(l.tx, l.rx)) {
                return Err(ThresholdError::DomainMismatch { tx: l.tx, rx: l.rx });
            }
        }
        Ok(Self { values })
    }

    pub fn get(&self, tx: NodeId, rx: NodeId) -> Option<f64> {
        self.values.get(&(tx, rx)).copied()
    }

    /// Minimum threshold over all links (`θ̂`); `1.0` for an empty link set.
    pub fn min_threshold(&self) -> f64 {
        self.values.values().copied().fold(f64::INFINITY, f64::min).min(1.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = ((NodeId, NodeId), f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PathError {
    #[error("a path needs at least two nodes")]
    TooShort,
    #[error("path must start at the source and end at the destination")]
    WrongEndpoints,
    #[error("node {node} repeats along the path")]
    RepeatedNode { node: NodeId },
    #[error("no link {tx}->{rx} in the network")]
    MissingLink { tx: NodeId, rx: NodeId },
    #[error("link {tx}->{rx} has zero capacity")]
    ZeroCapacityLink { tx: NodeId, rx: NodeId },
}

/// A simple source-to-destination path with capacity `C_p`.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    nodes: Vec<NodeId>,
    capacity: f64,
}

impl Path {
    /// Validates the node sequence against `net` and computes `C_p` as the
    /// minimum link capacity. Zero-capacity links are rejected: they carry
    /// nothing and would make per-link activation fractions undefined.
    pub fn new(net: &Network, nodes: Vec<NodeId>) -> Result<Self, PathError> {
        if nodes.len() < 2 {
            return Err(PathError::TooShort);
        }
        if nodes[0] != net.source() || *nodes.last().unwrap() != net.destination() {
            return Err(PathError::WrongEndpoints);
        }
        let mut seen = vec![false; net.n_nodes()];
        for &n in &nodes {
            if n >= net.n_nodes() || seen[n] {
                return Err(PathError::RepeatedNode { node: n });
            }
            seen[n] = true;
        }
        let mut capacity = f64::INFINITY;
        for w in nodes.windows(2) {
            let (tx, rx) = (w[0], w[1]);
            let cap = net
                .capacity(tx, rx)
                .ok_or(PathError::MissingLink { tx, rx })?;
            if cap <= 0.0 {
                return Err(PathError::ZeroCapacityLink { tx, rx });
            }
            capacity = capacity.min(cap);
        }
        Ok(Self { nodes, capacity })
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// `C_p`: the minimum link capacity along the path.
    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Ordered links `(tx, rx)` of the path.
    pub fn links(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn contains_link(&self, tx: NodeId, rx: NodeId) -> bool {
        self.links().any(|l| l == (tx, rx))
    }

    /// Node that follows `node` on the path, if any.
    pub fn next_node(&self, node: NodeId) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|&n| n == node)
            .and_then(|i| self.nodes.get(i + 1).copied())
    }

    /// Node that precedes `node` on the path, if any.
    pub fn prev_node(&self, node: NodeId) -> Option<NodeId> {
        self.nodes
            .iter()
            .position(|&n| n == node)
            .and_then(|i| i.checked_sub(1).map(|j| self.nodes[j]))
    }

    pub fn len_links(&self) -> usize {
        self.nodes.len() - 1
    }
}
