use std::path::PathBuf;
use std::process::{Command, Output};

fn spec(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("specs")
        .join(format!("{name}.toml"))
        .display()
        .to_string()
}

fn pflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pflab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "spec",
            "task",
            "horizon",
            "gamma",
            "grid",
            "value_num",
            "value_den",
            "runtime_ms",
            "truncated"
        ]
    );
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn dim_prints_an_integer_row() {
    let o = pflab(&[
        "--format",
        "csv",
        "dim",
        &spec("two_constant"),
        "--depth",
        "1",
    ]);
    assert!(o.status.success());
    let rows = rows(&o);
    assert_eq!(rows.len(), 1);
    assert_eq!(
        (
            rows[0][1].as_str(),
            rows[0][5].as_str(),
            rows[0][6].as_str()
        ),
        ("pfl", "1", "1")
    );
}

#[test]
fn randomized_sweep_over_horizons() {
    let o = pflab(&[
        "--format",
        "csv",
        "sweep",
        &spec("helly_six"),
        "--task",
        "rand",
        "--horizon",
        "1..4",
        "--grid",
        "6",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = rows(&o);
    assert_eq!(
        rows.iter().map(|r| r[2].as_str()).collect::<Vec<_>>(),
        ["1", "2", "3", "4"]
    );
    assert!(rows
        .iter()
        .all(|r| r[5] == "1" && r[6] == "3" && r[7] == "0"));
}

#[test]
fn empty_sweep_writes_only_the_header() {
    let o = pflab(&[
        "--format",
        "csv",
        "sweep",
        &spec("helly_six"),
        "--horizon",
        "",
    ]);
    assert!(o.status.success());
    assert!(rows(&o).is_empty());
}

#[test]
fn output_is_reproducible() {
    let args = [
        "--format",
        "csv",
        "sweep",
        &spec("binary_singleton"),
        "--task",
        "rand",
        "--horizon",
        "1..3",
        "--grid",
        "2,4",
    ];
    let a = pflab(&args);
    assert_eq!(stdout(&a), stdout(&pflab(&args)));
    assert_eq!(rows(&a).len(), 6);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    let o = pflab(&[
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
        "dim",
        &spec("two_constant"),
        "--depth",
        "2",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(path)
        .unwrap()
        .starts_with("spec,task,horizon"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        pflab(&["dim", "/nonexistent/spec.toml"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "labels = 0\n").unwrap();
    assert_eq!(
        pflab(&["dim", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    assert_eq!(
        pflab(&["--budget", "10", "dim", &spec("helly_six")])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        pflab(&["rand", &spec("helly_six"), "--grid", "100000"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn play_and_setsys_emit_json() {
    let o = pflab(&["play", &spec("two_constant")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
    let o = pflab(&["setsys", &spec("helly_six")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["helly"], 3);
}

#[test]
fn replicate_single_check() {
    let o = pflab(&["replicate", "--only", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.contains("PASS"));
}
