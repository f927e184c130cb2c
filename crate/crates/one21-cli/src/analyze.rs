//! The `analyze` subcommand: one JSON report per network.

use std::path::PathBuf;

use serde::Serialize;

use one21::bounds::{bound_report, path_count_check};
use one21::builders::{approx_capacity, build_p2, passive_capacity};
use one21::disjoint::{count_edge_disjoint, count_vertex_disjoint};
use one21::model::{Network, ThresholdMap};
use one21::schedule::{schedule_from_activations, BeamSchedule};
use one21::security::{passive_to_secure, secure_to_passive, ReductionReport};

use crate::theta::{apply_m_override, load_with_thresholds};
use crate::{read_file, round9, write_output, CliError};

#[derive(Serialize)]
struct NetworkSummary {
    n_relays: usize,
    m_beams: usize,
    n_links: usize,
    unit_capacity: bool,
}

#[derive(Serialize)]
struct ThetaSummary {
    min: f64,
    max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    uniform: Option<f64>,
}

#[derive(Serialize)]
struct BoundsOut {
    naive: f64,
    activation_ratio: f64,
    per_path: f64,
}

#[derive(Serialize)]
struct DisjointOut {
    edge: usize,
    vertex: usize,
}

#[derive(Serialize)]
struct PathCountOut {
    m_beams: usize,
    theta_used: f64,
    theta_c: f64,
    cbar: f64,
    required: f64,
    actual: usize,
    achievable: bool,
    rate: f64,
}

#[derive(Serialize)]
struct PassiveToSecureOut {
    k: usize,
    rate: f64,
    wiretap_penalty: f64,
}

#[derive(Serialize)]
struct SecureToPassiveOut {
    rate: f64,
    disjoint_count: usize,
}

#[derive(Serialize)]
struct SecurityOut {
    #[serde(skip_serializing_if = "Option::is_none")]
    passive_to_secure: Option<PassiveToSecureOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    secure_to_passive: Option<SecureToPassiveOut>,
}

#[derive(Serialize)]
struct StateOut {
    duration: f64,
    links: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    network: NetworkSummary,
    theta: ThetaSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    approx_capacity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    passive_capacity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<BoundsOut>,
    disjoint_paths: DisjointOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    path_count: Option<PathCountOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    security: Option<SecurityOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    schedule: Option<Vec<StateOut>>,
    notices: Vec<String>,
}

fn is_unit_capacity(net: &Network) -> bool {
    net.links().iter().all(|l| (l.capacity - 1.0).abs() <= 1e-9)
}

fn theta_summary(thresholds: &ThresholdMap) -> ThetaSummary {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for (_, v) in thresholds.iter() {
        min = min.min(v);
        max = max.max(v);
    }
    if thresholds.is_empty() {
        min = 1.0;
        max = 1.0;
    }
    ThetaSummary {
        min,
        max,
        uniform: (min == max).then_some(min),
    }
}

fn schedule_out(schedule: &BeamSchedule) -> Vec<StateOut> {
    schedule
        .states()
        .iter()
        .map(|s| StateOut {
            duration: round9(s.duration),
            links: s.state.links().to_vec(),
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    network: &PathBuf,
    theta: &str,
    theta_c: f64,
    m: Option<usize>,
    k: usize,
    out: Option<&PathBuf>,
    format: &str,
    dump_lp: Option<&PathBuf>,
) -> Result<(), CliError> {
    if format != "json" {
        return Err(CliError::Usage(format!(
            "analyze supports --format json, got {format}"
        )));
    }
    if !(0.0..=1.0).contains(&theta_c) {
        return Err(CliError::Usage(format!("--theta-c {theta_c} outside [0, 1]")));
    }
    let bytes = read_file(network)?;
    let (net, thresholds) = load_with_thresholds(&bytes, theta)?;
    let net = apply_m_override(net, m)?;
    let unit = is_unit_capacity(&net);
    let solver = |e: one21::builders::SolveError| CliError::Solver(e.to_string());

    let mut notices = Vec::new();
    let edge_cert = count_edge_disjoint(&net);
    let vertex_cert = count_vertex_disjoint(&net);

    let mut report = AnalyzeReport {
        network: NetworkSummary {
            n_relays: net.n_relays(),
            m_beams: net.m_beams(),
            n_links: net.links().len(),
            unit_capacity: unit,
        },
        theta: theta_summary(&thresholds),
        approx_capacity: None,
        passive_capacity: None,
        bounds: None,
        disjoint_paths: DisjointOut {
            edge: edge_cert.count,
            vertex: vertex_cert.count,
        },
        path_count: None,
        security: None,
        schedule: None,
        notices: Vec::new(),
    };

    if net.m_beams() == 1 {
        let unconstrained = approx_capacity(&net).map_err(solver)?;
        let constrained = passive_capacity(&net, &thresholds).map_err(solver)?;
        report.approx_capacity = Some(round9(unconstrained.rate()));
        report.passive_capacity = Some(round9(constrained.rate()));
        let b = bound_report(&net, &thresholds).map_err(|e| CliError::Solver(e.to_string()))?;
        report.bounds = Some(BoundsOut {
            naive: round9(b.naive),
            activation_ratio: round9(b.activation_ratio),
            per_path: round9(b.per_path),
        });
        let schedule = schedule_from_activations(&net, &constrained.activation_map())
            .map_err(|e| CliError::Solver(e.to_string()))?;
        report.schedule = Some(schedule_out(&schedule));

        if let Some(path) = dump_lp {
            let prob = build_p2(&net, Some(&thresholds))
                .map_err(|e| CliError::Input(e.to_string()))?;
            write_output(Some(path), prob.to_lp_text().as_bytes())?;
        }
    } else {
        notices.push(format!(
            "M = {} > 1: capacity LPs and activation schedules are M = 1 \
             constructs; reporting the constructive results only",
            net.m_beams()
        ));
        if dump_lp.is_some() {
            notices.push("--dump-lp skipped: the capacity LP is defined for M = 1".into());
        }
    }

    if unit {
        let theta_used = thresholds.min_threshold();
        let t1 = path_count_check(&net, theta_used, theta_c, net.m_beams())
            .map_err(|e| CliError::Solver(e.to_string()))?;
        if net.m_beams() > 1 {
            if let Some(s) = &t1.schedule {
                report.schedule = Some(schedule_out(s));
            }
        }
        report.path_count = Some(PathCountOut {
            m_beams: net.m_beams(),
            theta_used: round9(theta_used),
            theta_c: round9(theta_c),
            cbar: round9(t1.cbar),
            required: round9(t1.required),
            actual: t1.actual,
            achievable: t1.achievable,
            rate: round9(t1.rate),
        });

        let p2s = if net.m_beams() == 1 {
            match passive_to_secure(&net, &thresholds, k) {
                Ok(ReductionReport::PassiveToSecure {
                    rate,
                    wiretap_penalty,
                    ..
                }) => Some(PassiveToSecureOut {
                    k,
                    rate: round9(rate),
                    wiretap_penalty: round9(wiretap_penalty),
                }),
                Ok(_) => unreachable!("direction is fixed by the call"),
                Err(e) => return Err(CliError::Solver(e.to_string())),
            }
        } else {
            notices.push("secure-rate from passive scheme needs M = 1; skipped".into());
            None
        };
        let s2p = match secure_to_passive(&net, &thresholds, net.m_beams()) {
            Ok(ReductionReport::SecureToPassive {
                rate,
                disjoint_count,
                ..
            }) => Some(SecureToPassiveOut {
                rate: round9(rate),
                disjoint_count,
            }),
            Ok(_) => unreachable!("direction is fixed by the call"),
            Err(e) => return Err(CliError::Solver(e.to_string())),
        };
        report.security = Some(SecurityOut {
            passive_to_secure: p2s,
            secure_to_passive: s2p,
        });
    } else {
        notices.push(
            "non-unit link capacities: path-count conditions and secure-rate \
             reductions are unit-capacity results; skipped"
                .into(),
        );
    }

    report.notices = notices;
    let mut json = serde_json::to_vec_pretty(&report)
        .map_err(|e| CliError::Input(format!("report serialization: {e}")))?;
    json.push(b'\n');
    write_output(out, &json)
}
