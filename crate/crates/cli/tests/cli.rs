use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const LN2: f64 = std::f64::consts::LN_2;

fn rsm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsm")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn count_examples() {
    let out = rsm(&["count", "10110", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n,m,count,log_count\n5,2,3,1.09861228867\n");

    let out = rsm(&["count", "10110", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(csv_rows(&stdout(&out))[0][2], "1");

    let out = rsm(&["count", "0000", "1"]);
    assert_eq!(csv_rows(&stdout(&out))[0][2..], ["0", "-inf"]);
}

#[test]
fn count_usage_errors_exit_two() {
    for args in [&["count", "10", "101"][..], &["count", "1x0", "1"], &["count", "10"], &["frobnicate"]] {
        let out = rsm(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn count_in_bits_and_json() {
    let out = rsm(&["--bits", "--format", "json", "count", "1111", "11"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["command"], "count");
    assert_eq!(doc["config"]["unit"], "bits");
    assert!(doc["version"].as_str().unwrap().starts_with(env!("CARGO_PKG_VERSION")));
    assert_eq!(doc["rows"][0]["count"], 6);
    assert!((doc["rows"][0]["log_count"].as_f64().unwrap() - 6f64.log2()).abs() < 1e-12);
}

#[test]
fn figure1_small_run_is_reproducible() {
    let args = ["figure1", "--grid", "0,0.3,0.7", "-n", "400", "--samples", "3", "--seed", "7"];
    let (a, b) = (rsm(&args), rsm(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(!text.contains('\r'));
    assert!(text.starts_with("p,dgv_lower,mc_capacity,mc_stderr,upper_annealed\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][1..], ["0.69314718056", "0.69314718056", "0", "0.69314718056"]);
    let p07 = &rows[2];
    assert!(num(&p07[1]) <= num(&p07[2]) + 3.0 * num(&p07[3]));
    let other = rsm(&["figure1", "--grid", "0,0.3,0.7", "-n", "400", "--samples", "3", "--seed", "8"]);
    assert_ne!(other.stdout, a.stdout);
}

#[test]
fn figure1_writes_svg_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("curve.svg");
    let report = dir.path().join("curve.json");
    let out = rsm(&[
        "figure1",
        "--grid",
        "0:0.6:0.2",
        "-n",
        "300",
        "--samples",
        "2",
        "--plot",
        "--svg",
        svg.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let chart = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(chart.matches("<polyline").count(), 3);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["config"]["n"], 300);
    assert_eq!(doc["config"]["seed"], 42);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
    assert_eq!(doc["rows"][0]["mc_capacity"].as_f64().unwrap(), LN2);
}

#[test]
fn invalid_grids_exit_two() {
    for args in [
        &["figure2", "--grid", ""][..],
        &["figure2", "--grid", "0.3,0.7"],
        &["figure1", "--grid", "0.5,0.2"],
        &["figure1", "--grid", "1.0"],
        &["figure1", "--samples", "0", "--grid", "0.2"],
    ] {
        assert_eq!(rsm(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn figure2_tracks_strict_weak() {
    let out = rsm(&["--format", "json", "figure2", "-n", "10000"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    let field = |r: &Value, k: &str| r[k].as_f64().unwrap();
    let last = rows.last().unwrap();
    assert_eq!(field(last, "alpha"), 0.5);
    assert!(field(last, "null_mc").is_finite());
    let zeros = field(last, "null_zero_fraction");
    assert!(zeros > 0.0 && zeros < 1.0);
    // Below the endpoint no sample is empty and the curves stay close.
    for r in &rows[..rows.len() - 1] {
        assert_eq!(field(r, "null_zero_fraction"), 0.0);
        assert!((field(r, "strict_weak_exact") - field(r, "null_mc")).abs() < 0.05);
    }
    // At the endpoint empty samples count as zero; conditioning on a
    // nonempty sample restores closeness.
    let conditional = field(last, "null_mc") / (1.0 - zeros);
    assert!((field(last, "strict_weak_exact") - conditional).abs() < 0.05);
}

#[test]
fn verify_fast_passes_and_perturbation_fails() {
    let out = rsm(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    let residual_rows = text.lines().filter(|l| l.contains("planted_annealed") && l.contains("Z-1=")).count();
    assert_eq!(residual_rows, 19);
    assert!(text.lines().skip(1).all(|l| l.starts_with("PASS,")));

    let out = rsm(&["verify", "--perturb", "1e-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL,annealed,strict_weak_value"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checks failed"));
}

#[test]
fn alignment_experiment_reports_both_laws() {
    let out =
        rsm(&["--format", "json", "alignment-experiment", "-b", "16", "-n", "320", "--trials", "6", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows[0]["law"], "planted");
    assert_eq!(rows[1]["law"], "null");
    for r in rows {
        assert_eq!(r["trials"], 6);
        let frac = r["good_fraction"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&frac));
    }
    assert_eq!(doc["config"]["m"], 160);
    assert_eq!(rsm(&["alignment-experiment", "-b", "7", "-n", "320"]).status.code(), Some(2));
    assert_eq!(rsm(&["alignment-experiment", "--trials", "0"]).status.code(), Some(2));
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["figure1", "--grid", "0.2,0.5", "-n", "300", "--samples", "4"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_rsm")).args(args).env("RSM_THREADS", threads).output().unwrap()
    };
    let (one, three) = (run("1"), run("3"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn default_svg_path_is_relative_to_working_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rsm"))
        .args(["figure2", "--grid", "0.1,0.2", "-n", "200", "--samples", "2", "--plot"])
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("figure2.svg")).exists());
}
