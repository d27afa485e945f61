use std::process::{Command, Output};

use serde_json::Value;

fn osp21(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osp21"))
        .args(args)
        .env_remove("OSP21_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn float(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn verify_realization_passes() {
    let out = osp21(&["verify-algebra", "--realization", "ferma", "--cutoffs", "10", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["passed"], Value::Bool(true));
}

#[test]
fn verify_tag_passes_exactly() {
    let out = osp21(&["verify-algebra", "--tag", "s+1", "--j", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(float(&doc["reports"][0]["tolerance"]), 0.0);
    assert_eq!(float(&doc["reports"][0]["relations"][0]["residual"]), 0.0);
}

#[test]
fn zero_sector_label_is_a_usage_error() {
    assert_eq!(osp21(&["verify-algebra", "--tag", "t-1", "--j", "0"]).status.code(), Some(2));
    assert_eq!(osp21(&["spectrum", "jck", "--j", "0"]).status.code(), Some(2));
}

#[test]
fn unknown_tag_and_bad_tolerance_are_usage_errors() {
    assert_eq!(osp21(&["verify-algebra", "--tag", "q+1"]).status.code(), Some(2));
    assert_eq!(osp21(&["gamma", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(osp21(&["spectrum", "xyz"]).status.code(), Some(2));
}

#[test]
fn jck_j1_spectrum_contains_listed_values() {
    let out = osp21(&["spectrum", "jck", "--j", "1", "--omega", "1", "--omega0", "0.5", "--kappa", "0.2", "--lambda", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let values: Vec<f64> = doc["eigenvalues"].as_array().unwrap().iter().map(|z| float(&z[0])).collect();
    for expected in [4.4, -0.4] {
        assert!(values.iter().any(|v| (v - expected).abs() < 1e-9), "{expected} missing from {values:?}");
    }
    assert_eq!(doc["audit"]["unmatched"].as_array().unwrap().len(), 0);
    assert!(doc["audit"]["recurrence_diff"].is_object());
}

#[test]
fn mjc_closed_form_lists_every_branch_with_residuals() {
    let out = osp21(&["spectrum", "mjc", "--j", "3", "--omega", "1", "--omega0", "1", "--l1", "0.3", "--l2", "0.4", "--method", "closed-form"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["provenance"], "closed-form");
    assert_eq!(doc["eigenvalues"].as_array().unwrap().len(), 7);
    assert!(doc["residuals"].as_array().unwrap().iter().all(|r| float(r) < 1e-10));
}

#[test]
fn mjc_closed_form_without_coupling_is_a_usage_error() {
    let out = osp21(&["spectrum", "mjc", "--l1", "0", "--l2", "0", "--method", "closed-form"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decoupled_kerr_spectrum_is_diagonal() {
    let out = osp21(&["spectrum", "jck", "--j", "2", "--kappa", "0", "--method", "dense"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["eigenvalues"].as_array().unwrap().len(), 5);
    assert!(doc["eigenvalues"].as_array().unwrap().iter().all(|z| float(&z[1]) == 0.0));
}

#[test]
fn compare_reports_and_respects_strict() {
    let out = osp21(&["compare", "mjc", "--j", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert!(doc["reduced"]["unmatched"].is_array());
    assert!(doc["embedding"][0]["frobenius"].is_number());
    let strict = osp21(&["compare", "mjc", "--j", "2", "--strict"]);
    let expected = if doc["passed"] == Value::Bool(true) { 0 } else { 1 };
    assert_eq!(strict.status.code(), Some(expected));
    // With omega = 0 every closed-form branch sits in the full spectrum.
    let zero = osp21(&["compare", "mjc", "--j", "2", "--omega", "0", "--strict"]);
    assert_eq!(zero.status.code(), Some(0));
}

#[test]
fn compare_with_small_cutoffs_is_a_usage_error() {
    assert_eq!(osp21(&["compare", "jck", "--j", "1", "--cutoffs", "2", "2"]).status.code(), Some(2));
}

#[test]
fn compare_jck_lists_containment_of_listed_values() {
    let out = osp21(&["compare", "jck", "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let names: Vec<&str> = doc["additional"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"listed closed-form values"));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["spectrum", "jck", "--j", "3", "--kappa", "0.37"];
    assert_eq!(osp21(&args).stdout, osp21(&args).stdout);
    let args = ["compare", "mjc", "--j", "2", "--format", "csv"];
    assert_eq!(osp21(&args).stdout, osp21(&args).stdout);
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# jck run\nj = 2\nkappa = 0\nomega = 2\nformat = csv\n").unwrap();
    let out = osp21(&["spectrum", "jck", "--config", cfg.to_str().unwrap(), "--j", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    // j = 1 from the flag: three rows plus header.
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("index,re,im,residual"));

    std::fs::write(&cfg, "colour = red\n").unwrap();
    let out = osp21(&["gamma", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_osp21"))
        .args(["gamma", "--max-total", "4"])
        .env("OSP21_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("gamma.json")).unwrap()).unwrap();
    assert_eq!(written["gamma2"]["total_rows"], 15);
    assert_eq!(written["header"]["command"], "gamma");
}

#[test]
fn floats_round_trip_with_seventeen_digits() {
    let out = osp21(&["spectrum", "jck", "--j", "2", "--omega", "0.1", "--kappa", "0.3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    let first = doc["eigenvalues"][0][0].as_f64().unwrap();
    assert!(text.contains(&format!("{first:.16e}")));
}
