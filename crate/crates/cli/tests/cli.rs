use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn logcap(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logcap"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

#[test]
fn capacity_at_boundary_target() {
    let out = logcap(&fixtures(), &["cap", "--poly", "sum-squared.json", "--target", "2,0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "face-restricted");
    assert!((v["value"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn mixed_derivative_on_cycle() {
    let out = logcap(&fixtures(), &["der", "--poly", "cycle-2.json", "--target", "2,0,2,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], "4");
}

#[test]
fn suite_manifest_writes_its_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixtures().join("manifest-suite.json"), dir.path().join("manifest-suite.json")).unwrap();
    let out = logcap(dir.path(), &["run", "manifest-suite.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    let records = report.as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["verdict"] == "holds"));
}

#[test]
fn paired_cubes_violation_is_reported_but_not_fatal() {
    let out = logcap(&fixtures(), &["run", "manifest-paired-cubes.json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let lower = v.as_array().unwrap().iter().find(|r| r["id"] == "vdw-lower-homogeneous").unwrap();
    assert_eq!(lower["verdict"], "violated");
    assert_eq!(lower["guaranteed"], false);
}

#[test]
fn constructive_violation_exits_two() {
    let out = logcap(
        &fixtures(),
        &["verify", "--poly", "paired-cubes.json", "--bound", "main", "--kind", "homogeneous", "--provenance", "constructive"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_manifest_gives_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.json"), "{}").unwrap();
    let out = logcap(dir.path(), &["run", "m.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), Value::Array(vec![]));
}

#[test]
fn malformed_manifest_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.json"), "{\"seed\": 1,\n").unwrap();
    let out = logcap(dir.path(), &["run", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn sampled_command_in_manifest_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixtures().join("cycle-3.json"), dir.path().join("cycle-3.json")).unwrap();
    fs::write(dir.path().join("m.json"), r#"{"commands": [["slc", "--poly", "cycle-3.json"]]}"#).unwrap();
    let out = logcap(dir.path(), &["run", "m.json"]);
    assert_eq!(out.status.code(), Some(1));
    fs::write(dir.path().join("m.json"), r#"{"seed": 3, "commands": [["slc", "--poly", "cycle-3.json", "--samples", "20"]]}"#)
        .unwrap();
    let out = logcap(dir.path(), &["run", "m.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["--seed", "11", "verify", "--suite", "all"];
    let a = logcap(&fixtures(), &args);
    let b = logcap(&fixtures(), &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn frozen_weights_leave_log_concavity() {
    let out = logcap(
        &fixtures(),
        &["propagate", "--weights", "frozen-weights.json", "--poly", "frozen-cubic.json", "--grid", "0,1"],
    );
    // weights outside the propagatable class: leaving LC is expected, not a violation
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["propagatable"], false);
    assert_eq!(v["all_in_lc"], false);
}

#[test]
fn unknown_fixture_is_an_error() {
    let out = logcap(&fixtures(), &["cap", "--fixture", "no-such-fixture"]);
    assert_eq!(out.status.code(), Some(1));
}
