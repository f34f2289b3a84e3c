use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use unravel_cli::{exit_status, ReportRow};

fn unravel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unravel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn rows(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("json line"))
        .collect()
}

fn write_instance(dir: &Path, name: &str, v: &Value) -> String {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

fn z_x_instance() -> Value {
    let h = std::f64::consts::FRAC_1_SQRT_2 * std::f64::consts::FRAC_1_SQRT_2;
    json!({
        "dim": 2,
        "povm_m": [
            [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]],
            [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
        ],
        "povm_n": [
            [[[h, 0.0], [h, 0.0]], [[h, 0.0], [h, 0.0]]],
            [[[h, 0.0], [-h, 0.0]], [[-h, 0.0], [h, 0.0]]]
        ],
        "seed": 3
    })
}

#[test]
fn phi_min_trivial_gamma() {
    let out = unravel(&["phi-min", "--gamma", "1", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &rows(&out)[0];
    assert_eq!(r["details"]["analytic_min"], json!(0.0));
    assert_eq!(r["details"]["numeric_min"], json!(0.0));
}

#[test]
fn dft_basis_state_row() {
    let out = unravel(&["demo", "dft", "--dim", "2", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &rows(&out)[0];
    assert_eq!(r["check_name"], "dft_basis");
    assert!(r["slack"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn sweep_is_byte_identical() {
    let args = ["sweep", "--dim", "3", "--trials", "100", "--alpha-grid", "1.5,2,3", "--seed", "7"];
    let a = unravel(&args);
    let b = unravel(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["sweep", "--dim", "2", "--trials", "40", "--seed", "1"];
    let one = Command::new(env!("CARGO_BIN_EXE_unravel"))
        .args(args)
        .env("UNRAVEL_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_unravel"))
        .args(args)
        .env("UNRAVEL_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_unravel"))
        .args(args)
        .env("UNRAVEL_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn trial_rows_are_in_order() {
    let out = unravel(&["sweep", "--dim", "2", "--trials", "30", "--seed", "5"]);
    let trials: Vec<u64> = rows(&out).iter().map(|r| r["trial"].as_u64().unwrap()).collect();
    assert!(trials.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(*trials.last().unwrap(), 29);
}

#[test]
fn uncertainty_from_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_instance(dir.path(), "zx.json", &z_x_instance());
    let out = unravel(&["uncertainty", "--in", &path, "--alpha", "1", "--kind", "renyi"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &rows(&out)[0];
    let ln4 = 4f64.ln();
    assert!((r["lhs"].as_f64().unwrap() - ln4).abs() < 1e-12);
    assert!((r["rhs"].as_f64().unwrap() - ln4).abs() < 1e-12);
    assert_eq!(r["limit_extrapolated"], json!(true));
    assert_eq!(r["seed"], json!(3));

    let out = unravel(&["uncertainty", "--in", &path, "--alpha", "2", "--factor", "fbar"]);
    let r = &rows(&out)[0];
    assert_eq!(r["parameters"]["factor_kind"], "fbar");
    assert!(r["slack"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn extremal_reports_spectrum_and_minimality_rows() {
    let dir = tempfile::tempdir().unwrap();
    let s = 0.5f64.sqrt();
    let inst = json!({
        "dim": 2,
        "kraus": [
            [[[s, 0.0], [0.0, 0.0]], [[0.0, 0.0], [s, 0.0]]],
            [[[0.0, 0.0], [s, 0.0]], [[s, 0.0], [0.0, 0.0]]]
        ],
        "rho": [[[0.75, 0.0], [0.25, 0.0]], [[0.25, 0.0], [0.25, 0.0]]]
    });
    let path = write_instance(dir.path(), "ch.json", &inst);
    let out = unravel(&["extremal", "--in", &path, "--alpha-grid", "0.5,2", "--remixes", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let rs = rows(&out);
    assert_eq!(rs[0]["check_name"], "gram_trace");
    let lambdas = rs[0]["details"]["lambdas"].as_array().unwrap();
    assert_eq!(lambdas.len(), 2);
    // Π = [[1/2, 1/4], [1/4, 1/2]]
    assert!((lambdas[0].as_f64().unwrap() - 0.75).abs() < 1e-12);
    let names: Vec<&str> = rs[1..].iter().map(|r| r["check_name"].as_str().unwrap()).collect();
    assert_eq!(names, ["extremal_minimality_tsallis", "extremal_minimality_renyi", "extremal_minimality_tsallis"]);
    assert!(rs.iter().all(|r| r["slack"].as_f64().unwrap() >= -1e-10));
}

#[test]
fn invariant_violations_are_structured() {
    let dir = tempfile::tempdir().unwrap();
    let mut inst = z_x_instance();
    inst["rho"] = json!([[[0.5, 0.0], [0.3, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]);
    let path = write_instance(dir.path(), "bad.json", &inst);
    let out = unravel(&["uncertainty", "--in", &path, "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(err["error"]["invariant"], "hermitian");

    let out = unravel(&["uncertainty", "--in", "/nonexistent/x.json", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("input-file"));

    let out = unravel(&["sweep", "--dim", "2", "--alpha-grid", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_has_header_and_rows() {
    let out = unravel(&["demo", "dft", "--dim", "3", "--alpha", "1.5", "--trials", "3", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("check_name,trial,alpha,beta,mu,d,factor_kind,lhs,rhs,slack"));
    assert_eq!(lines.len(), 5);
}

#[test]
fn timing_is_opt_in() {
    let plain = rows(&unravel(&["demo", "angle", "--nbins", "4", "--L", "10", "--alpha", "2"]));
    assert!(plain.iter().all(|r| r["wall_time_ms"].is_null()));
    let timed = rows(&unravel(&["--timing", "demo", "angle", "--nbins", "4", "--L", "10", "--alpha", "2"]));
    assert!(timed.iter().all(|r| r["wall_time_ms"].is_f64()));
}

#[test]
fn negative_slack_sets_exit_status() {
    let ok = ReportRow::new("x", Default::default(), 1.0, 1.0 + 5e-10);
    let bad = ReportRow::new("x", Default::default(), 1.0, 1.0 + 1e-6);
    assert_eq!(exit_status(&[ok.clone()]), 0);
    assert_eq!(exit_status(&[ok, bad]), 1);
}

#[test]
fn ensemble_sweep_holds() {
    let out = unravel(&["ensemble", "--dim", "3", "--members", "4", "--alpha", "2", "--trials", "20"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out).len(), 60);
}
