//! End-to-end runs of the real binary: file round-trips, exit codes,
//! and deterministic output.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oriented-ramsey"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_is_deterministic_and_parses() {
    let a = run(&["gen", "--n", "12", "--seed", "7"]);
    let b = run(&["gen", "--n", "12", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("TOUR 1 12\n"));
    let c = run(&["gen", "--n", "12", "--seed", "8"]);
    assert_ne!(stdout(&a), stdout(&c), "different seeds, different hosts");
}

#[test]
fn ramsey_prints_the_known_value() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = dir.path().join("p3.otree");
    std::fs::write(&p3, "OTREE 1 3\n-1 0 1\n.++\n").unwrap();
    let out = run(&["ramsey", "--tree", p3.to_str().unwrap(), "--max-n", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "5");

    // Cap below the true value: lower bound only, exit 1.
    let capped = run(&["ramsey", "--tree", p3.to_str().unwrap(), "--max-n", "4"]);
    assert_eq!(capped.status.code(), Some(1));
    assert_eq!(stdout(&capped).trim(), ">= 5");
}

#[test]
fn pipeline_color_solve_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("host.ctour");
    let tree = dir.path().join("path.otree");

    let colored = run(&[
        "color", "--n", "64", "--seed", "3", "--coloring", "interval",
        "--out", host.to_str().unwrap(),
    ]);
    assert!(colored.status.success());
    assert!(Path::new(&host).exists());

    let parents: Vec<String> = (-1..5).map(|p| p.to_string()).collect();
    std::fs::write(&tree, format!("OTREE 1 6\n{}\n.+++++\n", parents.join(" "))).unwrap();

    let solved = run(&[
        "solve", "--input", host.to_str().unwrap(), "--tree", tree.to_str().unwrap(), "--trace",
    ]);
    assert!(solved.status.success(), "stderr: {}", String::from_utf8_lossy(&solved.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&solved)).unwrap();
    assert!(report["outcome"]["Found"].is_object());
    assert!(report["trace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn malformed_input_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tour");
    std::fs::write(&bad, "TOUR 1 3\n-10\n0-x\n10-\n").unwrap();
    let out = run(&["check-pseudo", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "diagnostic names the line: {err}");
}

#[test]
fn embed_reports_absence_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let plain = dir.path().join("tr4.tour");
    let host = dir.path().join("tiny.ctour");
    // Transitive host, blocks of two: both colour classes stop at P2.
    assert!(run(&["gen", "--n", "4", "--transitive", "--out", plain.to_str().unwrap()])
        .status
        .success());
    let gen = run(&["color", "--input", plain.to_str().unwrap(), "--coloring", "block",
        "--out", host.to_str().unwrap()]);
    assert!(gen.status.success());
    let tree = dir.path().join("p4.otree");
    std::fs::write(&tree, "OTREE 1 4\n-1 0 1 2\n.+++\n").unwrap();
    let out = run(&["embed", "--input", host.to_str().unwrap(),
        "--tree", tree.to_str().unwrap()]);
    // With block colouring on 4 vertices both classes are short of P4.
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn scaling_files_are_reproducible_apart_from_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let base1 = dir.path().join("one");
    let base2 = dir.path().join("two");
    for base in [&base1, &base2] {
        let out = run(&[
            "experiment", "scaling", "--grid", "24,48", "--seeds", "2",
            "--coloring", "random", "--seed", "5", "--out", base.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let strip = |p: &Path| {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(
        strip(&base1.with_extension("csv")),
        strip(&base2.with_extension("csv"))
    );
}
