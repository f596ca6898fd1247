use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "corpus", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thurston-kit")).args(args).env_remove("THURSTON_KIT_SEED").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), doc)
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("thurston-kit-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn validate_z3_succeeds() {
    let (code, doc) = json(&["validate", &corpus("z3.cover")]);
    assert_eq!(code, 0);
    assert_eq!(doc["command"], "validate");
    assert_eq!(doc["exit_code"], 0);
    assert_eq!(doc["result"]["valid"], true);
    assert_eq!(doc["result"]["fixed_critical_points"].as_array().unwrap().len(), 2);
}

#[test]
fn analyze_selfmating_reports_unit_eigenvalue_and_levy_cycle() {
    let (code, doc) = json(&[
        "analyze",
        &corpus("basilica-selfmating.cover"),
        "--multicurve",
        &corpus("basilica-selfmating-levy.curves"),
    ]);
    assert_eq!(code, 0);
    let r = &doc["result"];
    assert_eq!(r["matrix"], serde_json::json!([["1"]]));
    assert_eq!(r["lambda_lower"], "1");
    assert_eq!(r["lambda_upper"], "1");
    assert_eq!(r["decision"], "lambda>=1");
    assert_eq!(r["irreducible"], true);
    assert!(!r["levy_cycles"].as_array().unwrap().is_empty());
}

#[test]
fn analyze_newton_like_classifies_and_confirms() {
    let (code, doc) = json(&["analyze", &corpus("newton-like.cover"), "--multicurve", &corpus("newton-like.curves")]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["case"]["cases"], serde_json::json!(["NewtonLike"]));
    assert_eq!(doc["result"]["verdict"], "confirmed");
}

#[test]
fn missing_assign_line_is_a_parse_error_naming_it() {
    let text = std::fs::read_to_string(corpus("z3.cover")).unwrap();
    let cut: String = text.lines().filter(|l| !l.starts_with("assign inf")).map(|l| format!("{l}\n")).collect();
    let path = temp_file("missing.cover", &cut);
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line") && err.contains("assign"), "{err}");
}

#[test]
fn riemann_hurwitz_failure_is_a_validation_error() {
    let text = std::fs::read_to_string(corpus("z3.cover")).unwrap().replace("perm 0 (1 2 3)", "perm 0 ()");
    let path = temp_file("rh.cover", &text);
    let (code, doc) = json(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(doc["result"]["valid"], false);
}

#[test]
fn precondition_and_usage_exit_codes() {
    let out = run(&["verify", &corpus("basilica-selfmating.cover"), "--multicurve", &corpus("basilica-selfmating-levy.curves")]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(run(&["lift", &corpus("z3.cover")]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn report_file_matches_json_output() {
    let path = std::env::temp_dir().join(format!("thurston-kit-{}-report.json", std::process::id()));
    let out = run(&["corpus", "run", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let (_, printed) = json(&["corpus", "run"]);
    assert_eq!(written, printed);
    assert_eq!(written["result"]["failed"], 0);
}

#[test]
fn seed_environment_variable_overrides_flag() {
    let out = Command::new(env!("CARGO_BIN_EXE_thurston-kit"))
        .args(["--json", "fuzz", "--count", "3", "--seed", "1"])
        .env("THURSTON_KIT_SEED", "7")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["result"]["seed"], 7);
}

#[test]
fn fuzz_thousand_cubic_instances_exits_cleanly() {
    let (code, doc) = json(&["fuzz", "--count", "1000", "--seed", "7"]);
    assert_eq!(code, 0, "{}", doc["result"]["summary"]);
    assert_eq!(doc["result"]["summary"]["counterexample_flags"], 0);
    assert_eq!(doc["result"]["instances"].as_array().unwrap().len(), 1000);
}
