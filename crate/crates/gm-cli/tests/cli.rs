use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn gm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gm")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = gm(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn column(record: &Value, name: &str) -> Vec<f64> {
    let i = record["columns"].as_array().unwrap().iter().position(|c| c == name).unwrap();
    record["rows"].as_array().unwrap().iter().map(|r| r[i].as_f64().unwrap()).collect()
}

#[test]
fn kappa_grid_is_decreasing() {
    let r = json(&["kappa", "--group", "u1", "--energy-grid", "1:10:10"]);
    assert_eq!(r["schema_version"], "1");
    let kappa = column(&r, "kappa");
    assert_eq!(kappa.len(), 10);
    assert!(kappa.windows(2).all(|w| w[0] > w[1]));
}

#[test]
fn su2_large_energy_row() {
    let r = json(&["kappa", "--group", "su2", "--energy", "30"]);
    assert!(column(&r, "rel_err_large")[0] <= 5e-3);
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    let args = ["kappa", "--group", "so3", "--factor", "minus", "--energy-grid", "0.75,1,2.5,7"];
    let record = json(&args);
    let out = gm(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header, record["columns"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect::<Vec<_>>());
    for (line, row) in lines.zip(record["rows"].as_array().unwrap()) {
        for (cell, value) in line.split(',').zip(row.as_array().unwrap()) {
            match value.as_f64() {
                Some(v) => assert!((cell.parse::<f64>().unwrap() - v).abs() <= 1e-15 * v.abs().max(1.0)),
                None => assert!(cell.is_empty()),
            }
        }
    }
}

#[test]
fn infeasible_energy_is_a_row_error() {
    let out = gm(&["kappa", "--group", "so3", "--factor", "minus", "--energy-grid", "0.5,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let record: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record["rows"].as_array().unwrap().len(), 1);
    assert_eq!(record["errors"][0]["input"], 0.5);
    let line = String::from_utf8(out.stderr).unwrap();
    let err: Value = serde_json::from_str(line.lines().next().unwrap()).unwrap();
    assert_eq!(err["command"], "kappa");
}

#[test]
fn bad_grids_fail_with_json_on_stderr() {
    let out = gm(&["kappa", "--group", "u1", "--energy-grid", "3,2"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("ascending"));
}

#[test]
fn cut_limits() {
    let u1 = json(&["cut", "--group", "u1", "--cut", "10000"]);
    assert!((column(&u1, "n2_kappa")[0] / (PI * PI / 8.0) - 1.0).abs() < 1e-3);
    let so3 = json(&["cut", "--group", "so3", "--sector", "integer", "--cut", "10000"]);
    assert!((column(&so3, "n2_kappa")[0] / (PI * PI / 2.0) - 1.0).abs() < 1e-3);
}

#[test]
fn zero_cut_rows_are_the_zero_energy_anchors() {
    let cases = [
        (vec!["--group", "u1"], 1.0),
        (vec!["--group", "su2"], 1.0),
        (vec!["--group", "so3", "--sector", "integer"], 1.5),
        (vec!["--group", "so3", "--sector", "half-integer"], 1.0),
    ];
    for (group, anchor) in cases {
        let mut args = vec!["cut", "--cut", "0"];
        args.extend(group);
        assert!((column(&json(&args), "kappa")[0] - anchor).abs() < 1e-12);
    }
}

#[test]
fn cut_state_is_a_sine() {
    let r = json(&["state", "--group", "u1", "--cut", "1"]);
    let amplitudes = column(&r, "amplitude");
    let expected: Vec<f64> = (1..=3).map(|k| (k as f64 * PI / 4.0).sin() / 2f64.sqrt()).collect();
    for (a, e) in amplitudes.iter().zip(&expected) {
        assert!((a - e).abs() < 1e-12);
    }
    assert!((r["footer"]["norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn su2_state_is_nonnegative_and_unimodal() {
    let r = json(&["state", "--group", "su2", "--energy", "5"]);
    let beta: Vec<f64> = column(&r, "amplitude")
        .iter()
        .zip(column(&r, "weight"))
        .map(|(a, w)| a * w.sqrt())
        .collect();
    assert!(beta.iter().all(|&b| b >= 0.0));
    let peak = beta.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!(beta[..=peak].windows(2).all(|w| w[0] <= w[1]));
    assert!(beta[peak..].windows(2).all(|w| w[0] >= w[1]));
    assert!((r["footer"]["norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn real_line_state_is_gaussian() {
    let r = json(&["state", "--group", "real-line", "--energy", "1"]);
    let labels = column(&r, "label");
    let amplitudes = column(&r, "amplitude");
    for (x, a) in labels.iter().zip(&amplitudes) {
        assert!((a - (-x * x / 4.0).exp()).abs() < 1e-12);
    }
}

#[test]
fn simulation_is_reproducible_and_on_target() {
    let args = [
        "simulate", "--group", "u1", "--labels", "0,1", "--amplitudes", "1,1", "--samples", "400", "--trials",
        "2000", "--seed", "7", "--format", "json",
    ];
    let a = gm(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_gm")).args(args).env("GM_THREADS", "1").output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    let risk = column(&r, "scaled_risk")[0];
    let band = 3.0 * column(&r, "scaled_std_error")[0];
    assert!((risk - column(&r, "predicted_scaled_risk")[0]).abs() <= band);
}

#[test]
fn schur_summary() {
    let r = json(&["schur", "--qubits", "4000"]);
    assert!(r["footer"]["ks_to_chi2"].as_f64().unwrap() <= 0.02);
    assert_eq!(column(&r, "probability").len(), 4001);
}
