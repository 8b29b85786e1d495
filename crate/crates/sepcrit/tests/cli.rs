//! End-to-end tests of the `sepcrit` binary: JSON state I/O, criterion
//! dispatch, scans, exit codes, and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use sepcrit::io::{CheckDocument, ScanDocument, StateFile};
use sepcrit::states;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sepcrit"))
}

fn write_fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sepcrit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_detects_singlet_on_all_criteria() {
    let file = StateFile::from_density(&states::singlet());
    let path = write_fixture("singlet.json", &serde_json::to_string(&file).unwrap());
    let out = bin()
        .args(["check", "--state", path.to_str().unwrap(), "--criteria", "ppt,ccn,lur"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: CheckDocument = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc.reports.len(), 3);
    assert!(doc.reports.iter().all(|r| r.detected));
    assert!(doc.meta.is_some());
}

#[test]
fn check_reports_nothing_on_maximally_mixed() {
    let mixed = sepcrit::DensityMatrix::new(
        sepcrit::operator_algebra::identity(4).scale(0.25),
        2,
        2,
    )
    .unwrap();
    let file = StateFile::from_density(&mixed);
    let path = write_fixture("mixed.json", &serde_json::to_string(&file).unwrap());
    let out = bin()
        .args(["check", "--state", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: CheckDocument = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(doc.reports.iter().all(|r| !r.detected));
}

#[test]
fn check_honors_detection_margin_flag() {
    let file = StateFile::from_density(&states::singlet());
    let path = write_fixture("singlet_margin.json", &serde_json::to_string(&file).unwrap());
    // an absurd margin suppresses detection without changing the values
    let out = bin()
        .args([
            "check",
            "--tol-detect",
            "5.0",
            "--state",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let doc: CheckDocument = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!(doc.reports.iter().all(|r| !r.detected));
    let ccn = doc.reports.iter().find(|r| matches!(r.criterion, sepcrit::Criterion::Ccn));
    assert!((ccn.unwrap().value - 2.0).abs() < 1e-9);
}

#[test]
fn check_is_deterministic_without_meta() {
    let file = StateFile::from_density(&states::random_bipartite_density(2, 3, 4, 3).unwrap());
    let path = write_fixture("random23.json", &serde_json::to_string(&file).unwrap());
    let run = || {
        let out = bin()
            .args(["check", "--no-meta", "--state", path.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run(), "byte-identical output expected with --no-meta");
}

#[test]
fn check_rejects_malformed_json_with_exit_2() {
    let path = write_fixture("garbage.json", "{not json");
    let out = bin()
        .args(["check", "--state", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("parse"), "stderr: {err}");
}

#[test]
fn check_rejects_invalid_density_with_exit_2() {
    // Hermitian, unit trace, not positive semidefinite
    let json = r#"{"dim_a": 1, "dim_b": 2, "matrix": [[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]}"#;
    let path = write_fixture("invalid.json", json);
    let out = bin()
        .args(["check", "--state", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("min eigenvalue"), "stderr: {err}");
}

#[test]
fn check_rejects_missing_file_with_exit_2() {
    let out = bin()
        .args(["check", "--state", "/nonexistent/state.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_reproduces_ccn_threshold() {
    let out = bin()
        .args(["scan", "--family", "noisy_singlet", "--criterion", "ccn", "--tol", "1e-4"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc: ScanDocument = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert!((doc.scan.threshold - 0.292).abs() <= 1e-3, "{}", doc.scan.threshold);
    assert!(!doc.scan.monotonicity_warning);
    assert!(doc.scan.evaluations > 10);
}

#[test]
fn scan_rejects_unknown_family_and_criterion() {
    let out = bin()
        .args(["scan", "--family", "werner", "--criterion", "ccn"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["scan", "--family", "tiles", "--criterion", "ccnn"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_rejects_non_straddling_bracket() {
    let out = bin()
        .args([
            "scan", "--family", "noisy_singlet", "--criterion", "ccn", "--bracket", "0.0", "0.1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn demo_passes_and_emits_json() {
    let out = bin().args(["demo", "--json"]).output().unwrap();
    assert!(
        out.status.success(),
        "demo failed: {}",
        stdout_str(&out)
    );
    let doc: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(doc["passed"], serde_json::Value::Bool(true));
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.len() >= 9);
    assert!(rows.iter().all(|r| r["pass"] == serde_json::Value::Bool(true)));
}
