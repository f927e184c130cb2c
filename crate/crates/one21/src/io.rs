//! Network file format.
//!
//! ```json
//! {
//!   "n_relays": 5,
//!   "m_beams": 1,
//!   "links": [ {"tx": 0, "rx": 1, "cap": 2.0, "theta": 0.2}, ... ]
//! }
//! ```
//!
//! `theta` is optional per link; absent entries take the global default
//! supplied at load time. Fields may appear in any order; the document is
//! UTF-8 JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Link, Network, ThresholdError, ThresholdMap, ValidationError};

#[derive(Debug, Serialize, Deserialize)]
struct NetworkDoc {
    n_relays: usize,
    m_beams: usize,
    links: Vec<LinkDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LinkDoc {
    tx: usize,
    rx: usize,
    cap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Threshold(#[from] ThresholdError),
}

/// Parses and validates a network document. Links without `theta` get
/// `default_theta`.
pub fn load_network(bytes: &[u8], default_theta: f64) -> Result<(Network, ThresholdMap), LoadError> {
    let doc: NetworkDoc = serde_json::from_slice(bytes)?;
    let links: Vec<Link> = doc
        .links
        .iter()
        .map(|l| Link::new(l.tx, l.rx, l.cap))
        .collect();
    let net = Network::validated(doc.n_relays, doc.m_beams, links)?;
    let thetas: BTreeMap<(usize, usize), f64> = doc
        .links
        .iter()
        .map(|l| ((l.tx, l.rx), l.theta.unwrap_or(default_theta)))
        .collect();
    let thresholds = ThresholdMap::from_values(&net, thetas)?;
    Ok((net, thresholds))
}

/// Serializes a network; per-link `theta` entries are written when a
/// threshold map is supplied.
pub fn save_network(net: &Network, thresholds: Option<&ThresholdMap>) -> Vec<u8> {
    let doc = NetworkDoc {
        n_relays: net.n_relays(),
        m_beams: net.m_beams(),
        links: net
            .links()
            .iter()
            .map(|l| LinkDoc {
                tx: l.tx,
                rx: l.rx,
                cap: l.capacity,
                theta: thresholds.and_then(|t| t.get(l.tx, l.rx)),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("network serialization cannot fail");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1_example1() -> Network {
        let mut links = Vec::new();
        for k in 1..=5usize {
            let cap = if k == 1 { 2.0 } else { 1.0 };
            links.push(Link::new(0, k, cap));
            links.push(Link::new(k, 6, cap));
        }
        Network::validated(5, 1, links).unwrap()
    }

    #[test]
    fn round_trip_with_thetas() {
        let net = fig1_example1();
        let tm = ThresholdMap::uniform(&net, 0.2).unwrap();
        let bytes = save_network(&net, Some(&tm));
        let (net2, tm2) = load_network(&bytes, 0.9).unwrap();
        assert_eq!(net, net2);
        assert_eq!(tm, tm2);
    }

    #[test]
    fn default_theta_fills_missing_entries() {
        let json = br#"{
            "m_beams": 1,
            "n_relays": 1,
            "links": [{"rx": 1, "tx": 0, "cap": 1.5},
                      {"tx": 1, "rx": 2, "cap": 1.0, "theta": 0.3}]
        }"#;
        let (net, tm) = load_network(json, 0.7).unwrap();
        assert_eq!(net.capacity(0, 1), Some(1.5));
        assert_eq!(tm.get(0, 1), Some(0.7));
        assert_eq!(tm.get(1, 2), Some(0.3));
    }

    #[test]
    fn missing_field_is_a_parse_error() {
        let json = br#"{"n_relays": 1, "links": []}"#;
        match load_network(json, 1.0) {
            Err(LoadError::Parse(e)) => {
                assert!(e.to_string().contains("m_beams"), "got: {e}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_link_is_a_validation_error() {
        let json = br#"{
            "n_relays": 1, "m_beams": 1,
            "links": [{"tx": 0, "rx": 1, "cap": 1.0},
                      {"tx": 0, "rx": 1, "cap": 2.0},
                      {"tx": 1, "rx": 2, "cap": 1.0}]
        }"#;
        assert!(matches!(
            load_network(json, 1.0),
            Err(LoadError::Validation(_))
        ));
    }

    #[test]
    fn bad_theta_in_file_is_rejected() {
        let json = br#"{
            "n_relays": 1, "m_beams": 1,
            "links": [{"tx": 0, "rx": 1, "cap": 1.0, "theta": 1.2},
                      {"tx": 1, "rx": 2, "cap": 1.0}]
        }"#;
        assert!(matches!(
            load_network(json, 1.0),
            Err(LoadError::Threshold(_))
        ));
    }
}
