//! Threshold resolution for `--theta <value|file>`.
//!
//! Precedence per link, lowest to highest: the `--theta` default, a
//! `theta` entry in the network file, an entry in the override file.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Deserialize;

use one21::io::load_network;
use one21::model::{Network, ThresholdMap};

use crate::CliError;

#[derive(Deserialize)]
struct ThetaFile {
    #[serde(default)]
    default: Option<f64>,
    #[serde(default)]
    overrides: Vec<ThetaOverride>,
}

#[derive(Deserialize)]
struct ThetaOverride {
    tx: usize,
    rx: usize,
    theta: f64,
}

enum ThetaArg {
    Uniform(f64),
    File { default: f64, overrides: Vec<((usize, usize), f64)> },
}

fn parse_theta_arg(theta: &str) -> Result<ThetaArg, CliError> {
    if let Ok(v) = theta.parse::<f64>() {
        if !(0.0..=1.0).contains(&v) {
            return Err(CliError::Usage(format!("--theta {v} outside [0, 1]")));
        }
        return Ok(ThetaArg::Uniform(v));
    }
    let path = PathBuf::from(theta);
    let bytes = std::fs::read(&path)
        .map_err(|e| CliError::Usage(format!("--theta {theta}: not a number and {e}")))?;
    let doc: ThetaFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(ThetaArg::File {
        default: doc.default.unwrap_or(1.0),
        overrides: doc
            .overrides
            .into_iter()
            .map(|o| ((o.tx, o.rx), o.theta))
            .collect(),
    })
}

/// Loads a network file and resolves its thresholds against `--theta`.
pub fn load_with_thresholds(
    bytes: &[u8],
    theta: &str,
) -> Result<(Network, ThresholdMap), CliError> {
    let arg = parse_theta_arg(theta)?;
    let default = match &arg {
        ThetaArg::Uniform(v) => *v,
        ThetaArg::File { default, .. } => *default,
    };
    let (net, thresholds) =
        load_network(bytes, default).map_err(|e| CliError::Input(e.to_string()))?;
    let thresholds = match arg {
        ThetaArg::Uniform(_) => thresholds,
        ThetaArg::File { overrides, .. } => {
            let mut values: BTreeMap<(usize, usize), f64> = thresholds.iter().collect();
            for (link, v) in overrides {
                if !values.contains_key(&link) {
                    return Err(CliError::Input(format!(
                        "threshold override for unknown link {}->{}",
                        link.0, link.1
                    )));
                }
                values.insert(link, v);
            }
            ThresholdMap::from_values(&net, values)
                .map_err(|e| CliError::Input(e.to_string()))?
        }
    };
    Ok((net, thresholds))
}

/// Applies an `--m` override, revalidating the beam count.
pub fn apply_m_override(net: Network, m: Option<usize>) -> Result<Network, CliError> {
    match m {
        None => Ok(net),
        Some(0) => Err(CliError::Usage("--m must be at least 1".into())),
        Some(m) => Ok(net.with_m_beams(m)),
    }
}
