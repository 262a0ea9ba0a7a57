use std::io::Write;
use std::process::{Command, Output, Stdio};

use thickdist::dsl::parse_tree;

fn thickdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thickdist")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_thickdist"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn eval_prints_the_value() {
    let out = thickdist(&["eval", "project(dstar(1, Pf(n1/r^2)))"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "pv((-3*n1^2 + 1)/r^3) + (1/3)*C*delta\n");
}

#[test]
fn syntax_error_exits_2_with_caret() {
    let out = thickdist(&["eval", "Pf(n1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("\n  Pf(n1\n       ^"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn evaluation_error_exits_3() {
    let out = thickdist(&["eval", "Pf(1) * Pf(1)"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error: cannot multiply"));
}

#[test]
fn unknown_names_and_usage_exit_4() {
    for args in [&["paper", "nope"][..], &["frobnicate"], &["--dim", "1", "eval", "1"], &["--tolerance", "0", "check"], &["eval"]] {
        assert_eq!(thickdist(args).status.code(), Some(4), "{args:?}");
    }
}

#[test]
fn help_exits_0() {
    assert_eq!(thickdist(&["--help"]).status.code(), Some(0));
}

#[test]
fn bowen_output() {
    let out = thickdist(&["paper", "bowen", "--indices", "1,1,2", "--i", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("delta coefficient 4π/15 for exponent pattern (2,2,0)\n"), "{}", stdout(&out));
    let out = thickdist(&["paper", "bowen-naive", "--indices", "1,1,2", "--i", "2"]);
    assert!(stdout(&out).ends_with("delta coefficient 4π/27 (bowen-naive) vs 4π/15 (bowen): WRONG\n"), "{}", stdout(&out));
}

#[test]
fn named_formulas() {
    let cases = [
        (&["paper", "frahm"][..], "p.v.((3 xi xj − r^2 δij)/r^5) − (4π/3) δij δ\n"),
        (&["paper", "pd9"], "Pf((3 xi xj − r^2 δij)/r^5) + 4π(δij − 4 ni nj) δ∗\n"),
        (&["--dim", "2", "paper", "h4"], "2π(δij − 2 ni nj) δ∗\n"),
    ];
    for (args, want) in cases {
        let out = thickdist(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&out), want, "{args:?}");
    }
    assert_eq!(thickdist(&["--dim", "2", "paper", "frahm"]).status.code(), Some(3));
}

#[test]
fn tree_output_parses() {
    for args in [
        &["--format", "tree", "eval", "dstar(1, dstar(2, Pf(1/r)))"][..],
        &["--format", "tree", "eval", "project(dstar(1, Pf(n1/r^2)))"],
        &["--format", "tree", "eval", "moment(n1^2)"],
        &["--format", "tree", "paper", "h6"],
        &["--format", "tree", "paper", "bowen"],
    ] {
        let out = thickdist(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        for line in stdout(&out).lines() {
            parse_tree(line).unwrap_or_else(|e| panic!("{args:?}: {e}\n{line}"));
        }
    }
}

#[test]
fn latex_output() {
    let out = thickdist(&["--format", "latex", "paper", "frahm"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\\delta"), "{}", stdout(&out));
}

#[test]
fn batch_corpus_matches_expected() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");
    let out = thickdist(&["--batch", &format!("{dir}/corpus.txt")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let want = std::fs::read_to_string(format!("{dir}/corpus.expected")).unwrap();
    assert_eq!(stdout(&out), want);
}

#[test]
fn batch_keeps_going_and_reports_first_failure() {
    let out = with_stdin(&["eval", "--batch", "-"], "Pf(1)\n# note\nPf(n1\n\nPf(1)*Pf(1)\ndelta*\n");
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "Pf(1)\ndelta*\n");
    let err = stderr(&out);
    assert!(err.contains("line 3: error:") && err.contains("line 5: error:"), "{err}");
}

#[test]
fn check_is_deterministic() {
    let a = thickdist(&["check", "--seed", "11"]);
    let b = thickdist(&["check", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("200/200 probes pass"));
}

#[test]
fn unattainable_tolerance_fails() {
    let out = thickdist(&["check", "--tolerance", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}
