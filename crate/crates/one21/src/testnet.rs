//! Shared in-crate test fixtures.

use crate::model::{Link, Network};

/// The five-relay fan: links `0 -> k` and `k -> 6` for `k = 1..=5`.
/// Links of the first two-hop path get `p1_cap`, the rest `other_cap`.
pub fn fig1(p1_cap: f64, other_cap: f64) -> Network {
    let mut links = Vec::new();
    for k in 1..=5usize {
        let cap = if k == 1 { p1_cap } else { other_cap };
        links.push(Link::new(0, k, cap));
        links.push(Link::new(k, 6, cap));
    }
    Network::validated(5, 1, links).unwrap()
}

pub fn fig1_unit() -> Network {
    fig1(1.0, 1.0)
}

pub fn fig1_example1() -> Network {
    fig1(2.0, 1.0)
}

/// Single chain `0 -> 1 -> ... -> N+1` with the given link capacities.
pub fn chain(caps: &[f64]) -> Network {
    assert!(!caps.is_empty());
    let links = caps
        .iter()
        .enumerate()
        .map(|(i, &c)| Link::new(i, i + 1, c))
        .collect();
    Network::validated(caps.len() - 1, 1, links).unwrap()
}

/// `0 -> 1` fans out to relays 2 and 3, which rejoin at the destination 4.
/// Capacities: `head` on `0 -> 1`, `branch` on the four inner links.
pub fn diamond(head: f64, branch: f64) -> Network {
    let links = vec![
        Link::new(0, 1, head),
        Link::new(1, 2, branch),
        Link::new(1, 3, branch),
        Link::new(2, 4, branch),
        Link::new(3, 4, branch),
    ];
    Network::validated(3, 1, links).unwrap()
}
