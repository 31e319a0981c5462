use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_simplex-spectra"));
    c.env_remove("SIMPLEX_SPECTRA_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    cli().args(args).output().expect("binary runs")
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn frame_build_then_certify() {
    let dir = tempfile::tempdir().unwrap();
    let frame = dir.path().join("frame.json");
    let out = run(&["frame", "build", "--n", "3", "--out", arg(&frame)]);
    assert!(out.status.success());
    let f = json(&frame);
    assert_eq!((f["dim"].as_u64(), f["count"].as_u64()), (Some(3), Some(4)));

    let out = run(&["frame", "certify", "--in", arg(&frame)]);
    assert!(out.status.success());
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["equiangular"], true);
    assert_eq!(report["tight"], true);
    assert!((report["alpha"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((report["a"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-12);

    let ortho = dir.path().join("ortho.json");
    assert!(run(&["frame", "build", "--n", "3", "--kind", "orthonormal", "--out", arg(&ortho)]).status.success());
    let report: Value = serde_json::from_slice(&run(&["frame", "certify", "--in", arg(&ortho)]).stdout).unwrap();
    assert_eq!(report["alpha"].as_f64(), Some(0.0));
}

#[test]
fn tensor_build_forms() {
    let out = run(&["tensor", "build", "--kind", "simplex", "--n", "2", "--m", "3"]);
    assert!(out.status.success());
    let t: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t["repr"], "factored");
    assert_eq!(t["terms"].as_array().unwrap().len(), 3);

    let out = run(&["tensor", "build", "--kind", "odeco", "--n", "3", "--m", "4", "--dense"]);
    let t: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(t["repr"], "dense");
    assert_eq!(t["entries"].as_array().unwrap().len(), 81);
}

#[test]
fn capacity_override_from_environment() {
    let args = ["tensor", "build", "--kind", "simplex", "--n", "3", "--m", "4", "--dense"];
    assert!(run(&args).status.success());
    let out = cli().args(args).env("SIMPLEX_SPECTRA_CAP", "80").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("capacity"));
}

#[test]
fn solve_enumerate_classify_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let tensor = dir.path().join("t.json");
    let solved = dir.path().join("solved.json");
    let scanned = dir.path().join("scanned.json");
    let reports = dir.path().join("reports.json");
    assert!(run(&["tensor", "build", "--kind", "simplex", "--n", "2", "--m", "5", "--out", arg(&tensor)])
        .status
        .success());

    let out = run(&["eig", "solve", "--tensor", arg(&tensor), "--starts", "200", "--seed", "4", "--out", arg(&solved)]);
    assert!(out.status.success());
    let s = json(&solved);
    assert_eq!(s["seed"].as_u64(), Some(4));
    let pairs = s["pairs"].as_array().unwrap();
    assert!(!pairs.is_empty());
    let total: u64 = pairs.iter().map(|p| p["basin_count"].as_u64().unwrap()).sum();
    assert!(total <= 200);
    for p in pairs {
        assert!(p["residual"].as_f64().unwrap() <= 1e-10);
    }

    assert!(run(&["eig", "enumerate2d", "--tensor", arg(&tensor), "--grid", "720", "--out", arg(&scanned)])
        .status
        .success());
    let scanned_pairs = json(&scanned)["pairs"].as_array().unwrap().len();
    assert_eq!(scanned_pairs, 3);

    assert!(run(&["eig", "classify", "--tensor", arg(&tensor), "--pairs", arg(&scanned), "--out", arg(&reports)])
        .status
        .success());
    let r = json(&reports);
    for report in r.as_array().unwrap() {
        assert_eq!(report["robust"], "Robust");
        assert_eq!(report["stationarity"], "LocalMax");
        assert!((report["rho"].as_f64().unwrap() - 0.8).abs() < 1e-10);
        assert_eq!(report["k_spectrum"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn sweep_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let out = run(&["sweep", "--n", "2..3", "--m", "3..4", "--format", "csv", "--out", arg(&csv), "--strict"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,m,lambda_closed,rho_closed,rho_numeric,robust_closed,robust_numeric,n_plus_m,threshold_pass")
    );
    assert_eq!(lines.count(), 4);

    let js = dir.path().join("sweep.json");
    assert!(run(&["sweep", "--n", "4", "--m", "3", "--format", "json", "--out", arg(&js)]).status.success());
    let v = json(&js);
    assert!(v["generated_at"].as_u64().is_some());
    let row = &v["rows"][0];
    assert_eq!(row["robust_numeric"], "Robust");
    assert!((row["rho_numeric"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-10);

    assert!(run(&["sweep", "--n", "4", "--m", "3", "--format", "json", "--out", arg(&js), "--no-timestamp"])
        .status
        .success());
    assert!(json(&js).get("generated_at").is_none());
}

#[test]
fn conjecture_consistent_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("c.json");
    let out = run(&["conjecture", "--n", "3", "--m", "4", "--starts", "200", "--seed", "1", "--out", arg(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out_path);
    assert_eq!(r["verdict"]["status"], "Consistent");
    assert_eq!(r["heuristic"], true);
    assert_eq!(r["robust_pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x");
    for args in [
        vec!["frobnicate"],
        vec!["sweep", "--n", "5..2", "--out", arg(&out_path)],
        vec!["sweep", "--n", "1..3", "--out", arg(&out_path)],
        vec!["tensor", "build", "--kind", "simplex", "--n", "2", "--m", "2"],
        vec!["eig", "classify", "--tensor", "/nonexistent", "--pairs", "/nonexistent", "--out", arg(&out_path)],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
