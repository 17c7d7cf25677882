//! End-to-end checks of the command-line surface: exit codes, output
//! shapes, and byte determinism.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn dimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimer"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_conifold_is_consistent() {
    let out = dimer(&["check", &fixture("conifold")]);
    let v = stdout_json(&out);
    assert_eq!(v["consistent"], Value::Bool(true));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn check_reports_witness_types() {
    let v = stdout_json(&dimer(&["check", &fixture("inconsistent")]));
    assert_eq!(v["consistent"], Value::Bool(false));
    assert!(!v["same_direction_pairs"].as_array().unwrap().is_empty());
    let v = stdout_json(&dimer(&["check", &fixture("inconsistent_trivial")]));
    assert!(!v["trivial_paths"].as_array().unwrap().is_empty());
}

#[test]
fn polygon_of_conifold_is_unit_square() {
    let v = stdout_json(&dimer(&["polygon", &fixture("conifold")]));
    assert_eq!(v["polygon"], serde_json::json!([[0, 0], [1, 0], [1, 1], [0, 1]]));
}

#[test]
fn matchings_of_conifold() {
    let v = stdout_json(&dimer(&["matchings", &fixture("conifold")]));
    assert_eq!(v["matchings"].as_array().unwrap().len(), 4);
    let heights: Vec<Vec<i64>> = v["heights"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| h.as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect())
        .collect();
    let mut sorted = heights.clone();
    sorted.sort();
    assert_eq!(sorted, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert_eq!(v["polynomial"].as_array().unwrap().len(), 4);
}

#[test]
fn hj_record() {
    let v = stdout_json(&dimer(&["hj", "12", "5"]));
    assert_eq!(v["b"], serde_json::json!(["3", "2", "3"]));
    assert_eq!(v["i"], serde_json::json!(["12", "5", "3", "1", "0"]));
    assert_eq!(v["specials"], serde_json::json!(["0", "1", "3", "5"]));
    let v = stdout_json(&dimer(&["hj", "12", "5", "7"]));
    assert_eq!(v["decomposition"]["coefficients"], serde_json::json!(["1", "0", "2"]));
    assert_eq!(v["decomposition"]["dual_label"], serde_json::json!("11"));
}

#[test]
fn domain_errors_exit_one_with_json_diagnostic() {
    let out = dimer(&["hj", "12", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).expect("diagnostic is JSON");
    assert!(diag["error"].as_str().unwrap().contains("gcd"));
}

#[test]
fn usage_errors_exit_two() {
    let out = dimer(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn remove_vertex_roundtrip() {
    let dir = std::env::temp_dir().join("dimer-cli-test-remove");
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("pentagon.json");
    let out = dimer(&[
        "remove-vertex",
        &fixture("square_2x2"),
        "--corner",
        "0,2",
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&dimer(&["polygon", out_path.to_str().unwrap()]));
    assert_eq!(
        v["polygon"],
        serde_json::json!([[0, 0], [2, 0], [2, 2], [1, 2], [0, 1]])
    );
}

#[test]
fn synth_writes_consistent_model_and_trace() {
    let dir = std::env::temp_dir().join("dimer-cli-test-synth");
    std::fs::create_dir_all(&dir).unwrap();
    let model_path = dir.join("square.json");
    let trace_path = dir.join("trace.json");
    let out = dimer(&[
        "synth",
        "--polygon",
        "0,0 1,0 1,1 0,1",
        "-o",
        model_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v = stdout_json(&dimer(&["check", model_path.to_str().unwrap()]));
    assert_eq!(v["consistent"], Value::Bool(true));
    let v = stdout_json(&dimer(&["polygon", model_path.to_str().unwrap()]));
    assert_eq!(v["polygon"], serde_json::json!([[0, 0], [1, 0], [1, 1], [0, 1]]));
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert!(!trace["steps"].as_array().unwrap().is_empty());
    assert_eq!(
        trace["models"].as_array().unwrap().len(),
        trace["steps"].as_array().unwrap().len() + 1
    );
}

#[test]
fn render_is_deterministic_svg() {
    let a = dimer(&["render", &fixture("conifold"), "--matching", "0"]);
    let b = dimer(&["render", &fixture("conifold"), "--matching", "0"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<circle").count(), 2);
    // One matched edge drawn highlighted (possibly in several deck copies).
    assert!(svg.contains("#d62728"));
}

#[test]
fn outputs_are_byte_stable() {
    for args in [
        vec!["zigzags", &fixture("pentagon")],
        vec!["properly-ordered", &fixture("p1p1_ii")],
        vec!["hexagons", &fixture("pentagon"), "--corner", "2,0"],
    ] {
        let a = dimer(&args);
        let b = dimer(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn validate_reports_and_exits_by_validity() {
    let out = dimer(&["validate", &fixture("conifold")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["valid"], Value::Bool(true));

    let dir = std::env::temp_dir().join("dimer-cli-test-validate");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"nodes\": [], \"edges\": [], \"rotations\": {}}").unwrap();
    let out = dimer(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_renders() {
    let out = dimer(&["--format", "text", "check", &fixture("conifold")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("consistent: true"));
}
