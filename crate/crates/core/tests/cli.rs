use std::process::{Command, Output};

use serde_json::Value;

fn hahnbrf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hahnbrf"))
        .args(args)
        .env_remove("HAHNBRF_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn emit_matrix_to_stdout() {
    let o = hahnbrf(&[
        "emit", "matrix", "X", "--N", "1", "--alpha", "1/2", "--beta", "1/3",
    ]);
    assert!(o.status.success());
    assert_eq!(
        stdout_json(&o),
        serde_json::json!([["-1/2", "0"], ["-1", "1/2"]])
    );
}

#[test]
fn emit_forced_weight_and_lambda() {
    let o = hahnbrf(&[
        "emit", "weight", "w", "--N", "1", "--alpha", "1/2", "--beta", "2", "--force",
    ]);
    assert_eq!(stdout_json(&o), serde_json::json!(["5/4", "-1/4"]));
    let o = hahnbrf(&[
        "emit",
        "coefficients",
        "lambda",
        "--N",
        "5",
        "--alpha",
        "1/3",
        "--beta",
        "1/2",
    ]);
    assert_eq!(
        stdout_json(&o),
        serde_json::json!(["0", "7/2", "5", "9/2", "2", "-5/2"])
    );
}

#[test]
fn emit_uses_output_directory_variable() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hahnbrf"))
        .args(["emit", "matrix", "Z", "--N", "2", "--format", "csv"])
        .env("HAHNBRF_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("matrix_Z.csv")).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("-1,0,0\n"));
}

#[test]
fn verify_single_cell_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hahnbrf(&[
        "verify",
        "--N",
        "1",
        "--alpha",
        "1/2",
        "--beta",
        "1/3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    assert_eq!(report["summary"]["failed"], 0);
}

#[test]
fn forced_degenerate_input_reports_errors() {
    let o = hahnbrf(&[
        "verify", "--N", "2", "--alpha", "1", "--beta", "1/3", "--force",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("ERROR"));
}

#[test]
fn configuration_errors_exit_two() {
    let o = hahnbrf(&["verify", "--N", "2", "--alpha", "1", "--beta", "1/3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hahnbrf(&["verify", "no_such_check", "--N", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = hahnbrf(&["emit", "matrix", "W"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown selector"));
}

#[test]
fn named_check_with_seeded_draws() {
    let o = hahnbrf(&[
        "verify",
        "potential",
        "--N",
        "2,3",
        "--draws",
        "2",
        "--seed",
        "9",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("4 checks: 4 passed"));
}

#[test]
fn eval_and_params() {
    let o = hahnbrf(&[
        "eval", "U", "1", "0", "--N", "3", "--alpha", "1/2", "--beta", "1", "--force",
    ]);
    let v = stdout_json(&o);
    assert_eq!(v["value"], "3/2");
    assert_eq!(v["hypergeometric"], "3/2");
    let o = hahnbrf(&[
        "params", "--N", "2", "--alpha", "1/3", "--beta", "1", "--force",
    ]);
    let v = stdout_json(&o);
    assert_eq!(v["xi"]["xi0"], "-2/9");
    assert_eq!(v["lambda"], serde_json::json!(["0", "0", "-2"]));
}
