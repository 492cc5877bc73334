use std::process::{Command, Output};

use serde_json::{json, Value};

fn drwk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drwk")).args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn ok(args: &[&str]) -> Value {
    let out = drwk(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    json_of(&out)
}

#[test]
fn nf_dlog() {
    let v = ok(&["nf", "--m", "1", "--vars", "x", "--symbol", "{1+t, x}"]);
    assert_eq!(v["canon"], json!([[[[0], "1/x"]]]));
    assert_eq!(v["zero"], json!(false));
}

#[test]
fn nf_symbol_with_itself_is_zero() {
    let v = ok(&["nf", "--symbol", "{1+t,1+t}"]);
    assert_eq!(v["zero"], json!(true));
}

#[test]
fn nf_json_input_matches_text() {
    let text = ok(&["nf", "--m", "2", "--vars", "x", "--symbol", "2{1-3t, x}"]);
    let js = ok(&["nf", "--m", "2", "--vars", "x", "--json", r#"[{"coef": "2", "entries": [["1", "-3"], ["x"]]}]"#]);
    assert_eq!(text["canon"], js["canon"]);
}

#[test]
fn malformed_input_is_a_parse_error() {
    let out = drwk(&["nf", "--symbol", "{1+t"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["error"], json!("parse"));
}

#[test]
fn cyc_generator() {
    let v = ok(&["cyc", "--m", "2", "--gen", "(1-3t; x)"]);
    assert_eq!(v["canon"], json!([[[[0], "-3/x"]], [[[0], "-9/2/x"]]]));
    assert_eq!(v["diagonal_agrees"], json!(true));
}

#[test]
fn witt_ghost_and_add() {
    assert_eq!(ok(&["witt", "ghost", "--m", "2", "(3,0)"]), json!(["3", "9"]));
    let v = ok(&["witt", "add", "--m", "2", "(a,0)", "(b,0)"]);
    assert_eq!(v["coords"], json!(["a + b", "-a*b"]));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "cycle-iso", "--trials", "30", "--seed", "7"];
    let a = drwk(&args);
    let b = drwk(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["status"], json!("PASS"));
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["trials"] == json!(30)));
}

#[test]
fn verify_unknown_suite_is_an_input_error() {
    let out = drwk(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}
