use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treereduce"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn reduce_prints_normal_form() {
    let out = run(&["reduce", "xor(seq(a))"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "a");

    let out = run(&["reduce", "or(loop(tau,a),b)"]);
    assert_eq!(stdout(&out).trim(), "xor(tau,or(b,loop(a,tau)))");
}

#[test]
fn reduce_trace_is_json() {
    let out = run(&["reduce", "--trace", "xor(seq(a))"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a"));
    let trace: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(trace["summary"]["steps"], 2);
    assert_eq!(trace["steps"][0]["rule"], "S");
    assert_eq!(trace["summary"]["k"], 25);
}

#[test]
fn reduce_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_treereduce"))
        .arg("reduce")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"and(a,tau)\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out).trim(), "a");
}

#[test]
fn parse_errors_exit_two() {
    let out = run(&["reduce", "loop(a"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("syntax error"));
    assert_eq!(run(&["reduce", "loop(a)"]).status.code(), Some(2));
    assert_eq!(run(&["check", "rules", "--trials", "x"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--depth", "0"]).status.code(), Some(2));
}

#[test]
fn pipeline_reports_sizes() {
    let report = json(&run(&["pipeline", "xor(and(int(a,b),c),seq(d,e),loop(f,g))"]));
    assert!(report["netSizePtpn"].as_u64() < report["netSizePn"].as_u64());
    let leaf = json(&run(&["pipeline", "a"]));
    assert_eq!(leaf["treeSizeBefore"], 1);
    assert_eq!(leaf["treeSizeAfter"], 1);
    assert_eq!(leaf["netSizeUnreduced"], 5);
}

#[test]
fn translate_formats() {
    let net = json(&run(&["translate", "a", "--format", "json"]));
    assert_eq!(net["places"].as_array().unwrap().len(), 2);
    assert_eq!(net["transitions"].as_array().unwrap().len(), 1);
    let dot = stdout(&run(&["translate", "seq(a,b)", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
}

#[test]
fn gen_is_deterministic() {
    let a = run(&["gen", "--depth", "3", "--seed", "1"]);
    let b = run(&["gen", "--depth", "3", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let unique = stdout(&run(&["gen", "--depth", "3", "--alphabet", "3", "--unique", "--seed", "5"]));
    assert!(!unique.trim().is_empty());
}

#[test]
fn check_equiv() {
    let out = run(&["check", "equiv", "xor(a,a)", "a", "--len", "8", "--unroll", "3"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["equivalent"], true);
    let out = run(&["check", "equiv", "xor(a,b)", "a"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["onlyLeft"][0], "<b>");
}

#[test]
fn state_cap_variable() {
    let out = Command::new(env!("CARGO_BIN_EXE_treereduce"))
        .args(["check", "equiv", "and(a,b,c,d)", "and(a,b,c,d)"])
        .env("TREEREDUCE_STATE_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_treereduce"))
        .args(["check", "equiv", "a", "a"])
        .env("TREEREDUCE_STATE_CAP", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_classc() {
    let out = run(&["check", "classc", "loop(a,tau)"]);
    assert_eq!(out.status.code(), Some(1));
    let verdict = json(&out);
    assert_eq!(verdict["member"], false);
    assert_eq!(verdict["violations"][0]["condition"], "l.ii.redo-empty");

    let out = run(&["check", "classc", "xor(and(a,b,c),seq(d,e),loop(f,g))"]);
    assert!(out.status.success());
    assert_eq!(run(&["check", "classc", "int(int(a,b),c)"]).status.code(), Some(2));
    assert!(run(&["check", "classc", "--reduce", "xor(and(int(a,b),c),seq(d,e),loop(f,g))"])
        .status
        .success());
}

#[test]
fn check_probes() {
    let out = run(&["check", "rules", "--rule", "T_LoopBR", "--trials", "50", "--seed", "7"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(json(&out)["rules"][0]["rule"], "T_LoopBR");
    assert!(run(&["check", "confluence", "xor(or(a,tau),or(b,tau))"]).status.success());
    assert!(run(&["check", "confluence", "--trials", "10"]).status.success());
    assert!(run(&["check", "phi", "and(xor(tau,a),xor(tau,b))"]).status.success());
    let out = run(&["check", "phi", "int(a,b)"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn check_all_rules() {
    let out = run(&["check", "rules", "--trials", "500", "--seed", "7"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert_eq!(json(&out)["rules"].as_array().unwrap().len(), 18);
}
