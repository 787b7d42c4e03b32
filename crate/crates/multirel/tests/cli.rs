//! End-to-end tests of the command-line interface, driving the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multirel"))
}

fn laws_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../laws")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn temp_law(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("multirel-cli-{name}-{}.law", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_down_closure() {
    let out = run(&[
        "eval",
        "--sets",
        "X=1,Y=2",
        "--bind",
        "R={(a,{a}),(a,{b})}",
        "--expr",
        "down(R)",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "{(a,∅),(a,{a}),(a,{b})}");
}

#[test]
fn eval_json_and_explicit_typing() {
    let out = run(&[
        "eval",
        "--sets",
        "X=1,Y=2",
        "--bind",
        "R : X <-> P(Y) = {(a,∅)}",
        "--expr",
        "R^i",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["type"], "X <-> P(Y)");
    assert_eq!(doc["value"]["pairs"][0][1], serde_json::json!(["a", "b"]));
}

#[test]
fn eval_type_error_is_usage_error() {
    let out = run(&[
        "eval",
        "--sets",
        "X=1,Y=2",
        "--bind",
        "R={(a,{a})}",
        "--expr",
        "R ; R",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_valid_law_file() {
    let file = laws_dir().join("prop-3-2.law");
    let out = run(&["check", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11); // one JSON document per law
    for line in lines {
        let doc: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(doc["verdict"], "valid");
        assert!(doc["law"].is_string());
        assert!(doc["space"].is_u64());
        assert!(doc["checked"].is_u64());
    }
}

#[test]
fn check_counterexample_exits_one() {
    let path = temp_law(
        "cex",
        "set X = 1\nset Y = 2\nvar R : X <-> P(Y)\nlaw R icup R = R\n",
    );
    let out = run(&["check", path.to_str().unwrap(), "--format", "json"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 1);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["verdict"], "counterexample");
    assert_eq!(doc["binding"]["R"]["pairs"].as_array().unwrap().len(), 2);
}

#[test]
fn find_witness_and_none_found() {
    let file = laws_dir().join("iu-not-idempotent.law");
    let out = run(&["find", file.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("witness"));

    let path = temp_law(
        "none",
        "set X = 1\nset Y = 2\nlaw exists R : X <-> P(Y) . R != R\n",
    );
    let out = run(&["find", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("none_found"));
}

#[test]
fn sample_mode_reports_seed() {
    let file = laws_dir().join("prop-3-2.law");
    let out = run(&[
        "check",
        file.to_str().unwrap(),
        "--mode",
        "sample",
        "--samples",
        "50",
        "--seed",
        "7",
        "--format",
        "json",
        "--filter",
        "lu[X,Y]",
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(doc["verdict"], "sampled_pass");
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["checked"], 50);
}

#[test]
fn space_cap_exits_three() {
    let path = temp_law(
        "big",
        "set X = 3\nvar R : P(X) <-> P(P(X))\nlaw R = R\n",
    );
    let out = run(&["check", path.to_str().unwrap()]);
    std::fs::remove_file(&path).ok();
    assert_eq!(code(&out), 3);
}

#[test]
fn demo_runs_and_unknown_demo_is_usage_error() {
    let out = run(&["demo", "example-3-3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("example-3-3: pass"));

    let out = run(&["demo", "example-3-3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["pass"], true);

    let out = run(&["demo", "no-such-demo"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn selftest_filter_and_mutation() {
    let out = run(&["selftest", "--filter", "lifts"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("PASS"));

    let out = run(&["selftest", "--filter", "lifts", "--mutate"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}
