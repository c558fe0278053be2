//! End-to-end tests of the binary: output text and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn meadows(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meadows"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim().to_string()
}

fn write_pmf(name: &str, text: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("meadows-cli-test-{name}"));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn eval_totalised_division() {
    let out = meadows(&["eval", "1/0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "bot");
}

#[test]
fn eval_with_bindings_and_modes() {
    let out = meadows(&["eval", "x |*| log2(x)", "--bind", "x=0"]);
    assert_eq!(stdout(&out), "0");
    let out = meadows(&["eval", "1/0", "--mode", "suppes", "--carrier", "exact"]);
    assert_eq!(stdout(&out), "0");
    let out = meadows(&["eval", "log2(0)", "--mode", "signed"]);
    assert_eq!(stdout(&out), "-inf");
    let out = meadows(&["eval", "1/2 + 1/4", "--carrier", "exact"]);
    assert_eq!(stdout(&out), "3/4");
}

#[test]
fn eval_rejects_misuse_with_exit_2() {
    let out = meadows(&["eval", "x +"]);
    assert_eq!(out.status.code(), Some(2));
    let out = meadows(&["eval", "x"]);
    assert_eq!(out.status.code(), Some(2), "unbound variable");
    let out = meadows(&["eval", "bot", "--mode", "suppes"]);
    assert_eq!(out.status.code(), Some(2));
    let out = meadows(&["eval", "x", "--bind", "x=+inf"]);
    assert_eq!(out.status.code(), Some(2), "+inf needs signed mode");
    let out = meadows(&["eval", "log2(3)", "--carrier", "exact"]);
    assert_eq!(out.status.code(), Some(2), "inexact log2");
    let out = meadows(&["nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flatten_output_is_pipe_composable() {
    let term = "cond(1/x; y; 2) + s(x)*x |*| (1/y)";
    let out = meadows(&["flatten", term]);
    assert!(out.status.success());
    let flat = stdout(&out);
    for (x, y) in [("2", "1/2"), ("0", "-1"), ("bot", "1"), ("1", "0")] {
        let bx = format!("x={x}");
        let by = format!("y={y}");
        let original = meadows(&["eval", term, "--bind", &bx, "--bind", &by]);
        let flattened = meadows(&["eval", &flat, "--bind", &bx, "--bind", &by]);
        assert_eq!(stdout(&original), stdout(&flattened), "x={x} y={y}");
    }
}

#[test]
fn flatten_rejects_other_modes() {
    let out = meadows(&["flatten", "1/x", "--mode", "signed"]);
    assert_eq!(out.status.code(), Some(2));
    let out = meadows(&["flatten", "+inf"]);
    assert_eq!(out.status.code(), Some(2), "infinities are not bottom-mode syntax");
}

#[test]
fn measures_from_pmf_files() {
    let p = write_pmf("p.tsv", "heads\t1/2\ntails\t1/2\n");
    let q = write_pmf("q.tsv", "heads\t0\ntails\t1\n");
    let p = p.to_str().unwrap();
    let q = q.to_str().unwrap();

    let out = meadows(&["entropy", p, "--carrier", "exact"]);
    assert_eq!(stdout(&out), "1");
    let out = meadows(&["crossentropy", p, q]);
    assert_eq!(stdout(&out), "bot");
    let out = meadows(&["crossentropy", p, q, "--variant", "seqmul", "--carrier", "exact"]);
    assert_eq!(stdout(&out), "bot");
    let out = meadows(&["kl", p, p, "--carrier", "exact"]);
    assert_eq!(stdout(&out), "0");
    let out = meadows(&["js", p, p]);
    assert_eq!(stdout(&out), "0");
    let out = meadows(&["entropy", p, "--variant", "f-xy"]);
    assert_eq!(out.status.code(), Some(2), "f-xy is cross-entropy only");
}

#[test]
fn bayes_reports_the_counterexample() {
    let q = write_pmf("bayes.tsv", "a\t0\nb\t1\n");
    let out = meadows(&["bayes", q.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("guarded identity: OK"));
    assert!(text.contains("P(A|B)=0 vs P(B|A)*P(A)/P(B)=bot"));
}

#[test]
fn check_exit_codes() {
    let out = meadows(&["check", "absorption"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("0 failed"));
    let out = meadows(&["check", "no_such_suite"]);
    assert_eq!(out.status.code(), Some(2));
    let out = meadows(&["check", "flatten_soundness", "--terms", "40", "--seed", "7"]);
    assert!(out.status.success());
}
