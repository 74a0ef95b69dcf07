//! Exit codes and JSON shape of the command-line tool.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let Output {
        status,
        stdout,
        stderr,
    } = Command::new(env!("CARGO_BIN_EXE_planemap"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = status.code().expect("exited normally");
    let text = if stdout.is_empty() { stderr } else { stdout };
    let json = serde_json::from_slice(&text).unwrap_or(Value::Null);
    (code, json)
}

fn run_line(line: &str) -> (i32, Value) {
    run(&line.split_whitespace().collect::<Vec<_>>())
}

/// Writes `content` to a per-test file under the system temp directory.
fn scratch(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("planemap-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, content).expect("temp file writable");
    path
}

#[test]
fn malformed_polynomial_is_a_usage_error() {
    let (code, json) = run(&["rectify", "x^^2"]);
    assert_eq!(code, 2);
    assert_eq!(json["offset"], 2);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn rectify_reports_alpha_or_not_in_class() {
    let (code, json) = run(&["rectify", "x + y^2"]);
    assert_eq!(code, 0);
    assert_eq!(json["rectifiable"], true);
    let (code, json) = run(&["rectify", "x^2 + y^2"]);
    assert_eq!(code, 3);
    assert_eq!(json["rectifiable"], false);
}

#[test]
fn analyze_square_map() {
    let path = scratch("square.json", r#"{"f1": "x^2", "f2": "y"}"#);
    let (code, json) = run(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json["degree"], 2);
    assert_eq!(json["branch_locus"], "u");
}

#[test]
fn generated_instance_normalizes_and_verifies() {
    let (code, doc) = run_line("generate --type iii --d 2 --m 1 --n 1 --a -1 --seed 4 --word-len 2");
    assert_eq!(code, 0);
    let path = scratch("instance.json", &doc.to_string());
    let (code, json) = run(&["normalize", path.to_str().unwrap(), "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(json["normal_form"]["type"], "iii");
    assert!(json["trace"].is_object());
    let (code, json) = run(&["verify", path.to_str().unwrap(), "--samples", "3", "--seed", "1"]);
    assert_eq!(code, 0, "{json}");
    assert_eq!(json["verdict"], "pass");
}

#[test]
fn corrupted_instance_fails_verification() {
    let (_, mut doc) = run_line("generate --type i --d 2 --seed 9 --word-len 1");
    doc["f1"] = Value::from(format!("{} + x", doc["f1"].as_str().unwrap()));
    let path = scratch("corrupt.json", &doc.to_string());
    let (code, json) = run(&["verify", path.to_str().unwrap(), "--samples", "2"]);
    assert_eq!(code, 4);
    assert_eq!(json["verdict"], "fail");
}

#[test]
fn out_of_class_map_exits_three() {
    let path = scratch("cusp.json", r#"{"f1": "x^2", "f2": "y^2"}"#);
    assert_eq!(run(&["normalize", path.to_str().unwrap()]).0, 3);
}

#[test]
fn jcurve_verdicts() {
    let cusps = scratch(
        "cusps.json",
        r#"{"components": [{"p": "t^2", "q": "t^3"}, {"p": "t^4", "q": "t^6"}]}"#,
    );
    let (code, json) = run(&["jcurve", cusps.to_str().unwrap(), "--probes", "0"]);
    assert_eq!(code, 0);
    assert_eq!(json["verdict"], "candidate_j_curve");
    let line = scratch("line.json", r#"{"components": [{"p": "t", "q": "t^2"}]}"#);
    assert_eq!(
        run(&["jcurve", line.to_str().unwrap()]).1["verdict"],
        "not_j_curve"
    );
}
