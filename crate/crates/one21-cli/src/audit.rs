//! The `audit` subcommand: replay a schedule dump against a network.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use one21::builders::flow_rate_for_activations;
use one21::schedule::BeamSchedule;

use crate::theta::{apply_m_override, load_with_thresholds};
use crate::{read_file, round9, write_output, CliError};

#[derive(Serialize)]
struct LinkAudit {
    tx: usize,
    rx: usize,
    activation: f64,
    theta: f64,
    ok: bool,
}

#[derive(Serialize)]
struct AuditReport {
    n_states: usize,
    total_duration: f64,
    supported_rate: f64,
    links: Vec<LinkAudit>,
    violations: Vec<String>,
    pass: bool,
}

const AUDIT_EPS: f64 = 1e-9;

pub fn run(
    schedule: &PathBuf,
    network: &PathBuf,
    theta: &str,
    m: Option<usize>,
    out: Option<&PathBuf>,
) -> Result<(), CliError> {
    let schedule_bytes = read_file(schedule)?;
    let schedule = BeamSchedule::from_json(&schedule_bytes)
        .map_err(|e| CliError::Input(format!("{e}")))?;
    let net_bytes = read_file(network)?;
    let (net, thresholds) = load_with_thresholds(&net_bytes, theta)?;
    let net = apply_m_override(net, m)?;

    let mut violations = Vec::new();

    for (i, s) in schedule.states().iter().enumerate() {
        if s.duration < -AUDIT_EPS {
            violations.push(format!("state {i}: negative duration {}", s.duration));
        }
        for &(tx, rx) in s.state.links() {
            if net.capacity(tx, rx).is_none_or(|c| c <= 0.0) {
                violations.push(format!(
                    "state {i}: link {tx}->{rx} absent or unusable in the network"
                ));
            }
        }
        for v in s
            .state
            .beam_violations(net.source(), net.destination(), net.m_beams())
        {
            violations.push(format!("state {i}: {v}"));
        }
    }

    let total_duration = schedule.total_duration();
    if total_duration > 1.0 + AUDIT_EPS {
        violations.push(format!("total duration {total_duration} exceeds 1"));
    }

    let realized = schedule.link_activation();
    let mut links = Vec::new();
    for (&(tx, rx), &activation) in &realized {
        let theta = thresholds.get(tx, rx).unwrap_or(1.0);
        let ok = activation <= theta + AUDIT_EPS;
        if !ok {
            violations.push(format!(
                "link {tx}->{rx}: activation {activation} exceeds threshold {theta}"
            ));
        }
        links.push(LinkAudit {
            tx,
            rx,
            activation: round9(activation),
            theta,
            ok,
        });
    }

    // Rate supported by the realized activations (unknown links carry
    // nothing, so they are dropped from the flow computation).
    let known: BTreeMap<(usize, usize), f64> = realized
        .iter()
        .filter(|((tx, rx), _)| net.capacity(*tx, *rx).is_some_and(|c| c > 0.0))
        .map(|(&l, &a)| (l, a))
        .collect();
    let supported_rate =
        flow_rate_for_activations(&net, &known).map_err(|e| CliError::Solver(e.to_string()))?;

    let report = AuditReport {
        n_states: schedule.states().len(),
        total_duration: round9(total_duration),
        supported_rate: round9(supported_rate),
        links,
        pass: violations.is_empty(),
        violations,
    };
    let mut json = serde_json::to_vec_pretty(&report)
        .map_err(|e| CliError::Input(format!("report serialization: {e}")))?;
    json.push(b'\n');
    write_output(out, &json)?;

    if report.pass {
        Ok(())
    } else {
        Err(CliError::AuditViolations)
    }
}
