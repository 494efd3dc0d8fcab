//! End-to-end runs of the `cot` binary: output schemas, exit codes, unit
//! handling, and artifact reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn cot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.stderr.is_empty(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

fn write_lines(dir: &Path, name: &str, values: &[f64]) -> String {
    let path = dir.join(name);
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn distance_of_identical_files_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_lines(dir.path(), "a.txt", &[0.12, 0.4, 0.77]);
    let out = cot(&["distance", &file, &file, "--exact"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["method"], "exact");
    assert_eq!(report["cot"], 0.0);
    assert_eq!(report["n_x"], 3);
}

#[test]
fn distance_of_antipodal_singletons_is_half() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_lines(dir.path(), "a.txt", &[0.1]);
    let b = write_lines(dir.path(), "b.txt", &[0.6]);
    let out = cot(&["distance", &a, &b, "--exact"]);
    let report = stdout_json(&out);
    assert!((report["cot"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn point_mass_sits_a_quarter_turn_from_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_lines(dir.path(), "atom.txt", &[0.3; 20]);
    let out = cot(&["distance", &file, "--null", "uniform", "--grid", "1000"]);
    let report = stdout_json(&out);
    assert!((report["cot"].as_f64().unwrap() - 0.25).abs() <= 0.002);
    assert_eq!(report["method"], "grid");
    assert_eq!(report["resolution"], 1000);
}

#[test]
fn exact_flag_rejects_named_nulls() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_lines(dir.path(), "a.txt", &[0.1, 0.2]);
    let out = cot(&["distance", &file, "--null", "uniform", "--exact"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(!out.stderr.is_empty());
}

#[test]
fn units_give_identical_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let turns: Vec<f64> = (0..24).map(|i| (i as f64 + 0.3) / 24.0).collect();
    let degrees: Vec<f64> = turns.iter().map(|t| t * 360.0).collect();
    let tf = write_lines(dir.path(), "turns.txt", &turns);
    let df = write_lines(dir.path(), "degrees.txt", &degrees);
    let a = stdout_json(&cot(&["distance", &tf, "--null", "vonmises:0.5,2"]));
    let b = stdout_json(&cot(&[
        "--unit",
        "degrees",
        "distance",
        &df,
        "--null",
        "vonmises:0.5,2",
    ]));
    let x = a["cot"].as_f64().unwrap();
    let y = b["cot"].as_f64().unwrap();
    assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
}

#[test]
fn test_command_rejects_concentrated_samples_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_lines(dir.path(), "conc.txt", &[0.37; 30]);
    let out = cot(&[
        "test", &file, "--null", "uniform", "--N", "4000", "--D", "400", "--seed", "9",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["reject"], true);
    assert_eq!(report["method"], "cott");
    assert_eq!(report["schema"], 1);
}

#[test]
fn test_command_accepts_spread_samples_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    let values: Vec<f64> = (0..40).map(|i| (i as f64 + 0.5) / 40.0).collect();
    let file = write_lines(dir.path(), "spread.txt", &values);
    let out = cot(&[
        "test", &file, "--null", "uniform", "--N", "4000", "--D", "400", "--seed", "9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["reject"], false);
}

#[test]
fn empty_files_fail_with_runtime_exit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "# nothing here\n\n").unwrap();
    let out = cot(&["test", path.to_str().unwrap(), "--N", "100", "--D", "50"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "0.2\n0.5\nhello\n").unwrap();
    let out = cot(&["distance", path.to_str().unwrap(), "--null", "uniform"]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "stderr was: {err}");
}

#[test]
fn unknown_flags_exit_with_usage_code() {
    let out = cot(&["distance", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn simulate_is_reproducible() {
    let args = ["simulate", "--N", "10", "--D", "100", "--seed", "7"];
    let a = cot(&args);
    let b = cot(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert!(text.contains("# seed: 7"));
}

#[test]
fn quantiles_echo_flags_and_emit_rows() {
    let out = cot(&[
        "quantiles",
        "--null",
        "uniform",
        "--alphas",
        "0.1,0.05",
        "--N",
        "2000",
        "--D",
        "200",
        "--seed",
        "3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# null: uniform"));
    assert!(text.contains("alpha,quantile"));
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("alpha"))
        .collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        let q: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
        assert!(q > 0.0 && q < 1.0);
    }
}

#[test]
fn bootstrap_rejects_oversized_subsamples() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_lines(dir.path(), "a.txt", &[0.1, 0.5, 0.9]);
    let out = cot(&["bootstrap", &file, "--m", "10", "--B", "5"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn experiment_artifacts_are_reproducible_and_land_in_files() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.json");
    let out_path = dir.path().join("table.csv");
    let config = serde_json::json!({
        "id": "table1",
        "seed": 5,
        "resolution": 100,
        "curve_resolution": 100,
        "limit_replicates": 300,
        "reps": 20,
        "alpha": 0.05,
        "power_sample_size": 10,
        "sample_sizes": [5],
        "kappa_grid": [0.0],
        "stephens_concentrations": [2.0],
        "stephens_modes": [1],
        "bootstrap_exponent": 0.8,
        "out": null,
    });
    std::fs::write(&config_path, config.to_string()).unwrap();
    let run = |target: &Path| {
        let out = cot(&[
            "--out",
            target.to_str().unwrap(),
            "experiment",
            "--config",
            config_path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        std::fs::read(target).unwrap()
    };
    let first = run(&out_path);
    let second = run(&out_path);
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("# experiment: table1"));
}

#[test]
fn test2_distinguishes_shifted_from_identical() {
    let dir = tempfile::tempdir().unwrap();
    let xs: Vec<f64> = (0..50).map(|i| 0.2 + 0.1 * ((i as f64) / 50.0)).collect();
    let ys: Vec<f64> = xs.iter().map(|v| v + 0.5).collect();
    let xf = write_lines(dir.path(), "x.txt", &xs);
    let yf = write_lines(dir.path(), "y.txt", &ys);
    let shifted = cot(&["test2", &xf, &yf, "--B", "300", "--seed", "2"]);
    assert_eq!(shifted.status.code(), Some(3));
    let same = cot(&["test2", &xf, &xf, "--B", "300", "--seed", "2"]);
    assert_eq!(same.status.code(), Some(0));
}
