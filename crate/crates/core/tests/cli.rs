//! End-to-end runs of the `te-maxwell` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_te-maxwell"));
    c.env_remove("TE_MAXWELL_THREADS");
    c
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn certify_admissible_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let media = write(dir.path(), "m.json", r#"{"eps": 2, "mu": 1, "eps_hat": 1, "mu_hat": 2}"#);
    let out = dir.path().join("out");
    let (code, _) = run(&["certify", "--media", &media, "--wedge", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("certify.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["certified"], true);
    assert_eq!(report["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn identical_media_exit_one_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let media = write(dir.path(), "same.json", r#"{"eps": 1.5, "mu": 1.5, "eps_hat": 1.5, "mu_hat": 1.5}"#);
    let out = dir.path().join("out");
    let (code, err) = run(&["ball-eigs", "--media", &media, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("degenerate media: zero contrast"), "{err}");
}

#[test]
fn zero_trace_gives_zero_fields() {
    let dir = tempfile::tempdir().unwrap();
    let media = write(dir.path(), "m.json", r#"{"eps": 2, "mu": 1, "eps_hat": 1, "mu_hat": 2}"#);
    let trace = write(dir.path(), "zero.json", r#"{"fe": [[0, 0], [0, 0]], "fm": [[0, 0], [0, 0]]}"#);
    let out = dir.path().join("out");
    let (code, _) = run(&["halfspace", "--media", &media, "--trace", &trace, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = fs::read_to_string(out.join("fields.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("x3,E1_re,E1_im"));
    for line in lines {
        assert!(line.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0 && !v.starts_with('-')));
    }
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["certify", "--media", &bad, "--out", o],
        vec!["certify", "--media", "/nonexistent/m.json", "--out", o],
        vec!["certify", "--out", o],
    ] {
        let (code, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
    let (code, _) = {
        let out = bin().args(["decay", "--out", o]).env("TE_MAXWELL_THREADS", "zero").output().unwrap();
        (out.status.code().unwrap(), ())
    };
    assert_eq!(code, 2);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let media = write(dir.path(), "m.json", r#"{"eps": 2, "mu": 1, "eps_hat": 1, "mu_hat": 2}"#);
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        let status = bin()
            .args(["ball-eigs", "--media", &media, "--n-max", "3", "--radius", "8", "--out", out.to_str().unwrap()])
            .env("TE_MAXWELL_THREADS", threads)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push(fs::read(out.join("eigenvalues.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn decay_in_wedge_passes_and_real_frequency_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    assert_eq!(run(&["decay", "--out", o]).0, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("decay.json")).unwrap()).unwrap();
    assert!(report["result"]["c2"].as_f64().unwrap() > 0.0);
    let (code, err) = run(&["decay", "--real-omega", "--out", o]);
    assert_eq!(code, 1);
    assert!(err.contains("decay violation"), "{err}");
}

#[test]
fn grid_overrides_are_applied_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let media = write(dir.path(), "m.json", r#"{"eps": 2, "mu": 1, "eps_hat": 1, "mu_hat": 2}"#);
    let grid = write(dir.path(), "g.json", r#"{"xi_count": 10, "angle_count": 8, "k_count": 4}"#);
    let out = dir.path().join("out");
    let o = out.to_str().unwrap();
    assert_eq!(run(&["certify", "--media", &media, "--grid", &grid, "--out", o]).0, 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("certify.json")).unwrap()).unwrap();
    assert_eq!(report["result"]["scan"]["grid"]["xi_count"], 10);
    let typo = write(dir.path(), "t.json", r#"{"xi_cuont": 10}"#);
    assert_eq!(run(&["certify", "--media", &media, "--grid", &typo, "--out", o]).0, 2);
}

#[test]
fn operator_spec_on_radial_media() {
    let dir = tempfile::tempdir().unwrap();
    let n = 33;
    let eps: Vec<String> = (0..n).map(|j| format!("{}", 2.0 + 0.2 * (j as f64 / (n - 1) as f64))).collect();
    let ones = vec!["1.0"; n].join(",");
    let twos = vec!["2.0"; n].join(",");
    let media = write(
        dir.path(),
        "r.json",
        &format!(r#"{{"eps": [{}], "mu": [{ones}], "eps_hat": [{ones}], "mu_hat": [{twos}]}}"#, eps.join(",")),
    );
    let grid = write(dir.path(), "g.json", r#"{"threshold_moduli": [2, 4], "norm_cells": 60, "norm_points": 3}"#);
    let out = dir.path().join("out");
    let (code, err) = run(&[
        "operator-spec", "--media", &media, "--grid", &grid, "--n-max", "1", "--cells", "40", "--omega-max", "5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let csv = fs::read_to_string(out.join("spectrum.csv")).unwrap();
    assert!(csv.lines().count() > 2);
}
