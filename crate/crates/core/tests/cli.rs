//! End-to-end runs of the `rwc` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rwc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwc")).args(args).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn coeffs_writes_one_csv_per_temperature() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = rwc(&["coeffs", "--temps", "0,1", "--t-max", "2", "--steps", "4", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = read_csv(&dir.path().join("coeffs_T0.csv"));
    assert_eq!(header[0], "t");
    assert_eq!(header[10], "Delta");
    assert_eq!(rows.len(), 5);
    assert!(rows[0][1..].iter().all(|&v| v == 0.0));
    assert!(dir.path().join("coeffs_T1.csv").exists());
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = rwc(&["figure2", "--temps", "0", "--t-max", "3", "--steps", "6", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success());
    }
    let x = fs::read(a.path().join("figure2_T0.csv")).unwrap();
    let y = fs::read(b.path().join("figure2_T0.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn figure2_initial_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = rwc(&["figure2", "--temps", "0", "--t-max", "1", "--steps", "2", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let (header, rows) = read_csv(&dir.path().join("figure2_T0.csv"));
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let first = &rows[0];
    assert!((first[col("log_negativity")] - 1.0).abs() < 1e-10);
    assert!((first[col("l1_coherence")] - 1.0).abs() < 1e-10);
    assert!((first[col("trace_distance_sy")] - 1.0).abs() < 1e-10);
    assert!(first[col("g")] >= 0.0);
}

#[test]
fn json_output_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let out = dir.path().join("out");
    fs::write(
        &config,
        format!(
            r#"{{"version": 1, "bath": {{"temperatures": [0.5]}}, "grid": {{"times": [0, 0.5, 1]}},
               "initial_state": "plus", "frame": "lab", "output": {{"path": {:?}, "format": "json"}}}}"#,
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = rwc(&["trajectory", "--config", config.to_str().unwrap(), "--backend", "ode"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("trajectory.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["backend"], "ode");
    let table = &doc["tables"][0];
    assert_eq!(table["temperature"], 0.5);
    assert_eq!(table["rows"].as_array().unwrap().len(), 3);
    assert_eq!(table["rows"][0][3], 0.5);
}

#[test]
fn negative_alpha_is_a_config_error_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(&config, r#"{"bath": {"alpha": -0.1}}"#).unwrap();
    let o = rwc(&["coeffs", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bath.alpha"));
    let o = rwc(&["coeffs", "--alpha", "-0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bath.alpha"));
}

#[test]
fn empty_temperature_list_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.json");
    fs::write(&config, r#"{"bath": {"temperatures": []}}"#).unwrap();
    let o = rwc(&["validate", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bath.temperatures"));
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("broken.json");
    fs::write(&config, "{\n  \"grid\": {\"steps\": 10,}\n}").unwrap();
    let o = rwc(&["coeffs", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn unknown_flag_value_is_a_usage_error() {
    let o = rwc(&["coeffs", "--backend", "euler"]);
    assert_eq!(o.status.code(), Some(2));
}
