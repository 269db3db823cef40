//! End-to-end runs of the `gengeom` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn gengeom(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gengeom"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    child.wait_with_output().unwrap()
}

fn example(args: &[&str]) -> String {
    let out = gengeom(&[&["example"], args].concat(), None);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn circle_pipes_through_tdualize() {
    let doc = example(&["circle", "R=2"]);
    let out = gengeom(&["tdualize", "-"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.trim_start().starts_with('{'));
    assert!(report.contains("\"1/4\""));
}

#[test]
fn non_dualisable_lens_exits_with_one() {
    let doc = example(&["lens", "m=1", "k=2", "n=3"]);
    let out = gengeom(&["tdualize", "-", "--format", "text"], Some(&doc));
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL K2 is reducible"));
}

#[test]
fn reports_are_deterministic_for_a_fixed_seed() {
    let doc = example(&["heisenberg", "m=2"]);
    let run = || gengeom(&["check", "-", "--seed", "5", "--samples", "4", "--box", "-2,2"], Some(&doc)).stdout;
    assert_eq!(run(), run());
}

#[test]
fn malformed_documents_exit_with_two_and_name_the_field() {
    let doc = example(&["circle"]).replace("\"-1\"", "\"-1 +\"");
    let out = gengeom(&["relate", "-"], Some(&doc));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("shift_b"));
}

#[test]
fn para_check_on_heisenberg() {
    let doc = example(&["heisenberg"]);
    let out = gengeom(&["para-check", "-", "--format", "text"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fluxes: [\"f_{x z}^{y} = 1\"]"));
}

