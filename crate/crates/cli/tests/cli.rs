use std::path::Path;
use std::process::{Command, Output};

const EXAMPLE1: &str = include_str!("../../core/tests/fixtures/example1.qdimacs");

fn skolem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skolem"))
        .args(args)
        .env_remove("SKOLEM_SEED")
        .output()
        .expect("run binary")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn synth_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.qdimacs", EXAMPLE1);
    let out = dir.path().join("ex.skf").to_string_lossy().into_owned();
    let diag = dir.path().join("ex.jsonl").to_string_lossy().into_owned();
    let r = skolem(&["synth", &spec, "--out", &out, "--diag", &diag, "--samples", "200"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("y5 := true"));
    let lines: Vec<String> = std::fs::read_to_string(&diag).unwrap().lines().map(String::from).collect();
    assert!(lines.iter().any(|l| l.contains("unate +y5")));
    assert!(lines.last().unwrap().starts_with("{\"record\""));

    let r = skolem(&["verify", &spec, &out]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&r.stdout).trim(), "valid");
}

#[test]
fn verify_reports_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.qdimacs", EXAMPLE1);
    let bad = write(dir.path(), "bad.skf", "y3 := x1\ny4 := x1\ny5 := true\n");
    let r = skolem(&["verify", &spec, &bad]);
    assert_eq!(r.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&r.stdout);
    assert!(stdout.contains("counterexample: -1 2"), "{stdout}");
}

#[test]
fn verify_rejects_mismatched_variables() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.qdimacs", EXAMPLE1);
    let missing = write(dir.path(), "m.skf", "y3 := x1\n");
    assert_eq!(skolem(&["verify", &spec, &missing]).status.code(), Some(2));
    let garbage = write(dir.path(), "g.skf", "y3 = x1\n");
    assert_eq!(skolem(&["verify", &spec, &garbage]).status.code(), Some(2));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(skolem(&[]).status.code(), Some(3));
    assert_eq!(skolem(&["synth", "x.qdimacs", "--samples", "-4"]).status.code(), Some(3));
    assert_eq!(skolem(&["synth", "x.qdimacs", "--nj-mode", "sigma3"]).status.code(), Some(3));
    assert_eq!(skolem(&["--help"]).status.code(), Some(0));
    assert_eq!(skolem(&["--version"]).status.code(), Some(0));
    assert_eq!(skolem(&["synth", "/nonexistent.qdimacs"]).status.code(), Some(2));
}

#[test]
fn env_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "ex.qdimacs", EXAMPLE1);
    let r = Command::new(env!("CARGO_BIN_EXE_skolem"))
        .args(["synth", &spec])
        .env("SKOLEM_SAMPLES", "zero")
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn bench_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst");
    std::fs::create_dir(&inst).unwrap();
    write(&inst, "a.qdimacs", EXAMPLE1);
    write(&inst, "b.qdimacs", "p cnf 3 2\na 1 0\ne 2 3 0\n1 2 0\n-3 1 0\n");
    let csv = dir.path().join("out.csv").to_string_lossy().into_owned();
    let r = skolem(&["bench", inst.to_str().unwrap(), "--jobs", "2", "--csv", &csv, "--samples", "200"]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(2).unwrap().contains("solved-preprocess"));
    let summary = std::fs::read_to_string(format!("{csv}.summary.csv")).unwrap();
    assert!(summary.contains("solved,2"));

    let empty = tempfile::tempdir().unwrap();
    let r = skolem(&["bench", empty.path().to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&r.stdout).lines().count(), 1);
}
