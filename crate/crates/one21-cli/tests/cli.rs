//! End-to-end tests of the binary: file in, report out, exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_one21"))
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn fig1_json(p1_cap: f64) -> String {
    let mut links = Vec::new();
    for k in 1..=5 {
        let cap = if k == 1 { p1_cap } else { 1.0 };
        links.push(format!("{{\"tx\": 0, \"rx\": {k}, \"cap\": {cap:.1}}}"));
        links.push(format!("{{\"tx\": {k}, \"rx\": 6, \"cap\": {cap:.1}}}"));
    }
    format!(
        "{{\"n_relays\": 5, \"m_beams\": 1, \"links\": [{}]}}",
        links.join(", ")
    )
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reproduces_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(2.0));
    let out = bin()
        .args(["analyze"])
        .arg(&net)
        .args(["--theta", "0.2"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(report["approx_capacity"], 2.0);
    assert_eq!(report["passive_capacity"], 1.2);
    assert_eq!(report["bounds"]["naive"], 0.4);
    assert_eq!(report["bounds"]["activation_ratio"], 0.4);
    assert_eq!(report["bounds"]["per_path"], 0.4);
    assert_eq!(report["disjoint_paths"]["edge"], 5);
    assert_eq!(report["disjoint_paths"]["vertex"], 5);
    // Non-unit capacities: security and path-count sections are skipped.
    assert!(report["security"].is_null());
    assert!(report["path_count"].is_null());
    assert!(!report["notices"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_unit_capacities_with_security() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(1.0));
    let out = bin()
        .args(["analyze"])
        .arg(&net)
        .args(["--theta", "0.2", "--k", "1"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(report["passive_capacity"], 1.0);
    assert_eq!(report["path_count"]["actual"], 5);
    assert_eq!(report["path_count"]["achievable"], true);
    let p2s = &report["security"]["passive_to_secure"];
    assert_eq!(p2s["rate"], 0.8);
    assert_eq!(report["security"]["secure_to_passive"]["rate"], 1.0);
    assert_eq!(report["schedule"].as_array().unwrap().len(), 5);
}

#[test]
fn analyze_dumps_lp_text() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(1.0));
    let lp_path = dir.path().join("prob.lp");
    let out = bin()
        .args(["analyze"])
        .arg(&net)
        .args(["--theta", "0.2", "--dump-lp"])
        .arg(&lp_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&lp_path).unwrap();
    assert!(text.starts_with("Maximize"));
    assert!(text.contains("Subject To"));
    assert!(text.contains("<= 1"));
    assert!(text.contains("lam_0_1 <= 0.2"));
}

#[test]
fn analyze_rejects_invalid_network_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(
        dir.path(),
        "bad.json",
        r#"{"n_relays": 1, "m_beams": 1, "links": [{"tx": 1, "rx": 0, "cap": 1.0}]}"#,
    );
    let out = bin().args(["analyze"]).arg(&net).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Parse errors also map to 2.
    let garbled = write(dir.path(), "garbled.json", "{not json");
    let out = bin().args(["analyze"]).arg(&garbled).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_code_1() {
    let out = bin().args(["analyze"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn montecarlo_csv_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> Vec<u8> {
        let path = dir.path().join(name);
        let out = bin()
            .args([
                "montecarlo",
                "--n-relays",
                "6",
                "--trials",
                "10",
                "--seed",
                "42",
                "--out",
            ])
            .arg(&path)
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        // Summary goes to stderr as JSON.
        let summary: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(summary["trials"], 10);
        std::fs::read(&path).unwrap()
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b, "CSV must be byte-identical for a fixed seed");
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with(
        "trial_id,seed,approx_capacity,passive_capacity,ratio,active_edge_disjoint\n"
    ));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn montecarlo_json_format_and_summary_file() {
    let dir = tempfile::tempdir().unwrap();
    let records_path = dir.path().join("records.json");
    let summary_path = dir.path().join("summary.json");
    let out = bin()
        .args([
            "montecarlo",
            "--n-relays",
            "10",
            "--trials",
            "5",
            "--seed",
            "1",
            "--topology",
            "parallel-paths:5",
            "--cap-var",
            "0.0",
            "--format",
            "json",
            "--out",
        ])
        .arg(&records_path)
        .arg("--summary-out")
        .arg(&summary_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let records: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&records_path).unwrap()).unwrap();
    assert_eq!(records.as_array().unwrap().len(), 5);
    for r in records.as_array().unwrap() {
        assert_eq!(r["ratio"], 1.0);
        assert_eq!(r["active_edge_disjoint"], 5);
        assert!(r["wall_time_ms"].is_null(), "timing off by default");
    }
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&summary_path).unwrap()).unwrap();
    assert_eq!(summary["mean_ratio"], 1.0);
    assert_eq!(summary["active_histogram"]["5"], 5);
}

#[test]
fn audit_passes_emitted_schedule_and_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(1.0));
    let report_path = dir.path().join("report.json");
    let ok = bin()
        .args(["analyze"])
        .arg(&net)
        .args(["--theta", "0.2", "--out"])
        .arg(&report_path)
        .output()
        .unwrap();
    assert!(ok.status.success());
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&report_path).unwrap()).unwrap();
    let schedule_path = dir.path().join("schedule.json");
    std::fs::write(
        &schedule_path,
        serde_json::to_vec(&report["schedule"]).unwrap(),
    )
    .unwrap();

    let out = bin()
        .args(["audit"])
        .arg(&schedule_path)
        .arg(&net)
        .args(["--theta", "0.2"])
        .output()
        .unwrap();
    let audit = stdout_json(&out);
    assert_eq!(audit["pass"], true);
    assert_eq!(audit["supported_rate"], 1.0);

    // Double one duration: thresholds break and the exit code is 4.
    let mut schedule: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&schedule_path).unwrap()).unwrap();
    let d = schedule[0]["duration"].as_f64().unwrap();
    schedule[0]["duration"] = serde_json::json!(d * 2.0);
    std::fs::write(&schedule_path, serde_json::to_vec(&schedule).unwrap()).unwrap();
    let out = bin()
        .args(["audit"])
        .arg(&schedule_path)
        .arg(&net)
        .args(["--theta", "0.2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let audit: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(audit["pass"], false);
    assert!(!audit["violations"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_multi_beam_constructive_subset() {
    // Four parallel two-hop paths, M = 2: LP sections are skipped with a
    // notice; the path-count condition and constructive schedule remain.
    let dir = tempfile::tempdir().unwrap();
    let mut links = Vec::new();
    for k in 1..=4 {
        links.push(format!("{{\"tx\": 0, \"rx\": {k}, \"cap\": 1.0}}"));
        links.push(format!("{{\"tx\": {k}, \"rx\": 5, \"cap\": 1.0}}"));
    }
    let json = format!(
        "{{\"n_relays\": 4, \"m_beams\": 2, \"links\": [{}]}}",
        links.join(", ")
    );
    let net = write(dir.path(), "m2.json", &json);
    let out = bin()
        .args(["analyze"])
        .arg(&net)
        .args(["--theta", "0.5"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!(report["approx_capacity"].is_null());
    assert!(report["passive_capacity"].is_null());
    assert_eq!(report["path_count"]["m_beams"], 2);
    assert_eq!(report["path_count"]["cbar"], 2.0);
    assert_eq!(report["path_count"]["achievable"], true);
    assert_eq!(report["path_count"]["rate"], 2.0);
    assert_eq!(report["security"]["secure_to_passive"]["rate"], 2.0);
    assert!(report["security"]["passive_to_secure"].is_null());
    // The constructive schedule: max(M, H_v) = 4 states.
    assert_eq!(report["schedule"].as_array().unwrap().len(), 4);
    assert!(!report["notices"].as_array().unwrap().is_empty());
}

#[test]
fn audit_empty_schedule_passes_with_zero_rate() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(1.0));
    let schedule = write(dir.path(), "empty.json", "[]");
    let out = bin()
        .args(["audit"])
        .arg(&schedule)
        .arg(&net)
        .output()
        .unwrap();
    let audit = stdout_json(&out);
    assert_eq!(audit["pass"], true);
    assert_eq!(audit["supported_rate"], 0.0);
    assert_eq!(audit["n_states"], 0);
}

#[test]
fn theta_file_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(dir.path(), "net.json", &fig1_json(1.0));
    let thetas = write(
        dir.path(),
        "thetas.json",
        r#"{"default": 0.3, "overrides": [{"tx": 0, "rx": 1, "theta": 0.05}]}"#,
    );
    let out = bin()
        .args(["analyze"])
        .arg(&net)
        .arg("--theta")
        .arg(&thetas)
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(report["theta"]["min"], 0.05);
    assert_eq!(report["theta"]["max"], 0.3);
}
