//! The `montecarlo` subcommand.

use std::path::PathBuf;

use serde::Serialize;

use one21::montecarlo::{run_trials, summarize, to_csv, TrialConfig, TrialError, TrialRecord};
use one21::topology::TopologySpec;

use crate::{round9, write_output, CliError};

#[derive(Serialize)]
struct RecordOut {
    trial_id: usize,
    seed: u64,
    approx_capacity: f64,
    passive_capacity: f64,
    ratio: f64,
    active_edge_disjoint: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_ms: Option<f64>,
}

fn record_out(r: &TrialRecord, timing: bool) -> RecordOut {
    RecordOut {
        trial_id: r.trial_id,
        seed: r.seed,
        approx_capacity: round9(r.approx_capacity),
        passive_capacity: round9(r.passive_capacity),
        ratio: round9(r.ratio),
        active_edge_disjoint: r.active_edge_disjoint,
        wall_time_ms: timing.then(|| round9(r.wall_time_ms)),
    }
}

fn map_trial_error(e: TrialError) -> CliError {
    match e {
        TrialError::Trial { .. } => CliError::Solver(e.to_string()),
        other => CliError::Input(other.to_string()),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    n_relays: usize,
    trials: usize,
    theta: f64,
    cap_mean: f64,
    cap_var: f64,
    topology: &str,
    seed: u64,
    out: Option<&PathBuf>,
    format: &str,
    timing: bool,
    summary_out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let topology: TopologySpec = topology
        .parse()
        .map_err(|e: one21::topology::GenerateError| CliError::Usage(e.to_string()))?;
    if !(0.0..=1.0).contains(&theta) {
        return Err(CliError::Usage(format!("--theta {theta} outside [0, 1]")));
    }
    let cfg = TrialConfig {
        n_relays,
        trials,
        theta,
        cap_mean,
        cap_variance: cap_var,
        topology,
        seed,
    };
    let records = run_trials(&cfg).map_err(map_trial_error)?;

    let rendered: Vec<u8> = match format {
        "csv" => to_csv(&records, timing).into_bytes(),
        "json" => {
            let rows: Vec<RecordOut> = records.iter().map(|r| record_out(r, timing)).collect();
            let mut v = serde_json::to_vec_pretty(&rows)
                .map_err(|e| CliError::Input(format!("record serialization: {e}")))?;
            v.push(b'\n');
            v
        }
        other => {
            return Err(CliError::Usage(format!(
                "--format must be csv or json, got {other}"
            )))
        }
    };
    write_output(out, &rendered)?;

    let mut summary = summarize(&records);
    summary.mean_ratio = round9(summary.mean_ratio);
    summary.min_ratio = round9(summary.min_ratio);
    summary.max_ratio = round9(summary.max_ratio);
    let mut summary_json = serde_json::to_vec_pretty(&summary)
        .map_err(|e| CliError::Input(format!("summary serialization: {e}")))?;
    summary_json.push(b'\n');
    match summary_out {
        Some(path) => write_output(Some(path), &summary_json)?,
        None => eprintln!("{}", String::from_utf8_lossy(&summary_json).trim_end()),
    }
    Ok(())
}
