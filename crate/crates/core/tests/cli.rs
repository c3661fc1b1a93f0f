//! End-to-end runs of the `exwkb` binary.

use std::process::{Command, Output};

use serde_json::Value;

fn exwkb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exwkb")).args(args).env_remove("EXWKB_TOL").output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is one JSON object")
}

#[test]
fn coeffs_table_has_21_agreeing_rows() {
    let o = exwkb(&["wkb", "coeffs", "--order", "20"]);
    assert!(o.status.success());
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    assert!(rows.iter().all(|r| r["riccati"] == r["closed_form"]));
    assert_eq!(v["config"]["order"], 20);
}

#[test]
fn trace_emits_csv() {
    let o = exwkb(&["branches", "trace", "--from", "0.01", "--to", "0.99", "--label", "X3", "--csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("s,re,im"));
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert!((last[0] - 0.99).abs() < 1e-12);
    // X3 ends on the branch that starts at -sqrt3/4 at s = 1
    assert!((last[1] + 3f64.sqrt() / 4.0).abs() < 0.1);
}

#[test]
fn verification_commands_pass() {
    for args in [
        &["branches", "verify", "--order", "6"][..],
        &["verify", "voros", "--grid", "default", "--json"],
        &["verify", "airy-link", "--x", "0.8660254037844387,-0.5", "--eta", "5"],
        &["pearcey", "verify", "--points", "100", "--seed", "42", "--json"],
        &["pearcey", "recursion", "--order", "3", "--json"],
        &["weyl", "verify", "--json"],
        &["verify", "all", "--fast"],
    ] {
        let o = exwkb(args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(json(&o)["passed"], true, "{args:?}");
    }
}

#[test]
fn voros_report_is_below_threshold() {
    let v = json(&exwkb(&["verify", "voros", "--grid", "default", "--json"]));
    assert!(v["max_plus_residual"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["rows"].as_array().unwrap().len(), 30);
}

#[test]
fn exit_codes_follow_failure_class() {
    assert_eq!(exwkb(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(exwkb(&["wkb", "series", "--format", "xml"]).status.code(), Some(2));
    // x on the Stokes line arg x = 0
    assert_eq!(exwkb(&["resum", "laplace", "--x", "1,0", "--eta", "5", "--sign", "+"]).status.code(), Some(3));
    assert_eq!(exwkb(&["branches", "trace", "--label", "X4"]).status.code(), Some(3));
    assert_eq!(exwkb(&["verify", "voros", "--grid", "coarse"]).status.code(), Some(3));
    // a tolerance the reference cannot deliver
    let o = exwkb(&["--tol", "1e-40", "verify", "airy-link", "--x", "0.8660254037844387,-0.5", "--eta", "5"]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn tolerance_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_exwkb"))
        .args(["resum", "laplace", "--x", "1,-0.5", "--eta", "5", "--sign", "-"])
        .env("EXWKB_TOL", "1e-6")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(json(&o)["config"]["tol"], 1e-6);
}

#[test]
fn minus_sign_is_a_value() {
    let o = exwkb(&["wkb", "borel", "--sign", "-", "--order", "6"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["config"]["sign"], "-");
    assert_eq!(v["variable"], "1-s");
}
