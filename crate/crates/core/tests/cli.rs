//! End-to-end tests of the `perspectra` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn perspectra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perspectra"))
        .args(args)
        .env_remove("PERSPECTRA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn persp_prints_the_closed_form() {
    let o = perspectra(&[
        "persp", "--fn", "huber", "--param", "rho=1", "--eta", "2", "--y", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn invalid_parameter_is_a_usage_error() {
    let o = perspectra(&[
        "persp", "--fn", "huber", "--param", "rho=-1", "--eta", "2", "--y", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn div_reads_csv_files() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "0.5\n0.5\n");
    let b = write(&dir, "b.csv", "0.25\n0.75\n");
    let o = perspectra(&["div", "--phi", "kl", "--x", &a, "--y", &b]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.130812036).abs() < 1e-9);
    let o = perspectra(&["div", "--phi", "entropy", "--x", &a, "--y-file", &b]);
    let w: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - w).abs() <= 1e-15);
}

#[test]
fn div_with_power_divergence_and_inline_values() {
    let o = perspectra(&[
        "div",
        "--phi",
        "power_div",
        "--param",
        "p=2",
        "--x",
        "1,0",
        "--y",
        "0,1",
    ]);
    assert_eq!(stdout(&o), "2\n");
    let o = perspectra(&["div", "--phi", "power_div", "--x", "1", "--y", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn inline_and_file_vectors_are_exclusive() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.csv", "1\n");
    let o = perspectra(&["eval", "--fn", "entropy", "--y", "1", "--y-file", &b]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_data_file_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "1\nabc\n");
    let o = perspectra(&["eval", "--fn", "entropy", "--y", &bad]);
    assert_eq!(o.status.code(), Some(3));
    let o = perspectra(&["tv", "--grid", &bad, "--h", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let missing = dir.path().join("missing.csv");
    let o = perspectra(&["fisher", "--grid", missing.to_str().unwrap(), "--h", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn grid_functionals() {
    let dir = TempDir::new().unwrap();
    let step = write(&dir, "step.csv", "0\n0\n1\n1\n");
    assert_eq!(
        stdout(&perspectra(&["tv", "--grid", &step, "--h", "1"])),
        "1\n"
    );
    let neg = write(&dir, "neg.csv", "1\n-1\n2\n");
    assert_eq!(
        stdout(&perspectra(&["fisher", "--grid", &neg, "--h", "1"])),
        "inf\n"
    );
    let plane = write(&dir, "plane.csv", "1,1,1\n1,1,1\n");
    assert_eq!(
        stdout(&perspectra(&["tv", "--grid", &plane, "--h", "0.5"])),
        "0\n"
    );
}

#[test]
fn minseq_demo_rows() {
    let o = perspectra(&["demo", "minseq", "--p", "1", "--n", "3"]);
    let rows: Vec<Vec<f64>> = stdout(&o)
        .lines()
        .map(|l| l.split('\t').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(
        rows,
        vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.5, 2.0],
            vec![2.0, 1.0 / 3.0, 3.0]
        ]
    );
}

#[test]
fn lsc_demo_ends_at_the_origin() {
    let o = perspectra(&["demo", "lsc", "--p", "2", "--steps", "10"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[..11].iter().all(|l| l.ends_with("\t1")));
    assert_eq!(lines[11], "origin\t0");
}

fn parse_printed(s: &str) -> f64 {
    s.trim().parse().unwrap()
}

fn parse_json_value(v: &Value) -> f64 {
    match v {
        Value::String(s) => parse_printed(s),
        other => other.as_f64().unwrap(),
    }
}

#[test]
fn json_round_trips_printed_values() {
    let cases: &[&[&str]] = &[
        &[
            "persp", "--fn", "huber", "--param", "rho=1", "--eta", "3", "--y", "0.1",
        ],
        &["persp", "--fn", "entropy", "--eta", "0.7", "--y", "0.3"],
        &[
            "persp", "--fn", "norm_pow", "--param", "p=2", "--eta", "0", "--y", "1,1",
        ],
        &[
            "eval", "--fn", "fair", "--param", "rho=2", "--param", "p=1.5", "--y", "-0.123",
        ],
        &["div", "--phi", "kl", "--x", "0.2,0.8", "--y", "0.4,0.6"],
    ];
    for args in cases {
        let text = parse_printed(&stdout(&perspectra(args)));
        let mut json_args = vec!["--json"];
        json_args.extend_from_slice(args);
        let json: Value = serde_json::from_str(&stdout(&perspectra(&json_args))).unwrap();
        assert_eq!(parse_json_value(&json["value"]), text, "{args:?}");
    }
}

#[test]
fn check_reports_are_json() {
    let o = perspectra(&[
        "--json", "check", "--fn", "huber", "--param", "rho=1", "--dim", "2", "--trials", "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<Value> = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!reports.is_empty());
    for r in &reports {
        for key in ["name", "trials", "seed", "failures", "passed"] {
            assert!(r.get(key).is_some(), "{key} missing");
        }
        assert_eq!(r["passed"], true);
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: Option<&str>, extra: &[&str]| -> Vec<Value> {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_perspectra"));
        cmd.args(["--json", "check", "--fn", "entropy", "--trials", "20"])
            .args(extra);
        match seed {
            Some(s) => cmd.env("PERSPECTRA_SEED", s),
            None => cmd.env_remove("PERSPECTRA_SEED"),
        };
        serde_json::from_str(&String::from_utf8(cmd.output().unwrap().stdout).unwrap()).unwrap()
    };
    assert_eq!(run(Some("77"), &[])[0]["seed"], 77);
    assert_eq!(run(Some("77"), &["--seed", "5"])[0]["seed"], 5);
    assert_ne!(run(None, &[])[0]["seed"], 77);
}

#[test]
fn injected_defect_fails_a_single_function_check() {
    let o = perspectra(&[
        "check",
        "--fn",
        "norm_pow",
        "--param",
        "p=2",
        "--trials",
        "200",
        "--inject-defect",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn json_input_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    let y = write(&dir, "y.json", "[3.0, 4.0]");
    let o = perspectra(&["eval", "--fn", "norm_pow", "--param", "p=1", "--y", &y]);
    assert_eq!(stdout(&o), "5\n");
    assert!(Path::new(&y).exists());
}
