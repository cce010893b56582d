use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_frechet-sweep"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn example_a(dir: &Path) -> (PathBuf, PathBuf) {
    (
        write(dir, "a.txt", "2\n0 0\n2 0\n"),
        write(dir, "b.txt", "2\n0 1\n2 1\n"),
    )
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn decide_prints_yes_and_no() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let o = run(&[
        "decide",
        "--pi",
        s(&a),
        "--sigma",
        s(&b),
        "--delta",
        "1.0",
        "--selfcheck",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "YES");
    let o = run(&["decide", "--pi", s(&a), "--sigma", s(&b), "--delta", "0.9"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "NO");
}

#[test]
fn negative_delta_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let o = run(&["decide", "--pi", s(&a), "--sigma", s(&b), "--delta", "-1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta"));
}

#[test]
fn bad_inputs_fail() {
    let dir = TempDir::new().unwrap();
    let (a, _) = example_a(dir.path());
    let bad = write(dir.path(), "bad.txt", "3\n0 0\n1 x\n");
    let o = run(&["decide", "--pi", s(&a), "--sigma", s(&bad), "--delta", "1"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&[
        "decide",
        "--pi",
        s(&a),
        "--sigma",
        "/nonexistent/curve.txt",
        "--delta",
        "1",
    ]);
    assert!(!o.status.success());
    let o = run(&["decide", "--pi", s(&a), "--bogus"]);
    assert!(!o.status.success());
}

#[test]
fn frechet_prints_value() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let o = run(&["frechet", "--pi", s(&a), "--sigma", s(&b), "--tol", "1e-9"]);
    assert!(o.status.success());
    let v: f64 = stdout(&o).parse().unwrap();
    assert!((v - 1.0).abs() <= 1e-9);
}

#[test]
fn sweep_prints_interval_and_trace() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let trace = dir.path().join("events.jsonl");
    let o = run(&[
        "sweep",
        "--pi",
        s(&a),
        "--sigma",
        s(&b),
        "--dir",
        "0",
        "-1",
        "--delta",
        "0.5",
        "--range",
        "0",
        "3",
        "--trace",
        s(&trace),
        "--selfcheck",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), "FEASIBLE 0.5 1.5");
    let lines = std::fs::read_to_string(&trace).unwrap();
    let pi = frechet_sweep::Curve::from_xy(&[(0.0, 0.0), (2.0, 0.0)]);
    let sigma = frechet_sweep::Curve::from_xy(&[(0.0, 1.0), (2.0, 1.0)]);
    let plan = frechet_sweep::sweep::enumerate_sweep_events(
        &pi,
        &sigma,
        frechet_sweep::Direction2::new(0.0, -1.0).unwrap(),
        (0.0, 3.0),
        0.5,
        frechet_sweep::Tolerance::default(),
    );
    assert_eq!(lines.lines().count(), plan.events.len());
    for l in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert!(v.get("lambda").is_some());
    }
}

#[test]
fn sweep_without_feasible_translation() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let o = run(&[
        "sweep",
        "--pi",
        s(&a),
        "--sigma",
        s(&b),
        "--dir",
        "1",
        "0",
        "--delta",
        "0.5",
        "--range",
        "0",
        "3",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "INFEASIBLE");
}

#[test]
fn xlate2d_modes_and_json() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", "2\n0 0\n1 0\n");
    let b = write(dir.path(), "b.txt", "2\n5 5\n6 5\n");
    for mode in ["oracle", "events"] {
        let o = run(&[
            "xlate2d",
            "--pi",
            s(&a),
            "--sigma",
            s(&b),
            "--delta",
            "0.1",
            "--mode",
            mode,
            "--selfcheck",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let out = stdout(&o);
        let parts: Vec<&str> = out.split_whitespace().collect();
        assert_eq!(parts[0], "YES");
        let (tx, ty): (f64, f64) = (parts[1].parse().unwrap(), parts[2].parse().unwrap());
        assert!(((tx + 5.0).powi(2) + (ty + 5.0).powi(2)).sqrt() <= 0.1 + 1e-9);
    }
    let o = run(&[
        "xlate2d",
        "--pi",
        s(&a),
        "--sigma",
        s(&b),
        "--delta",
        "0.1",
        "--mode",
        "events",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["feasible"], true);
    assert_eq!(v["counts"]["ve_curves"], 4);

    let c = write(dir.path(), "c.txt", "2\n0 0\n3 0\n");
    let o = run(&[
        "xlate2d",
        "--pi",
        s(&a),
        "--sigma",
        s(&c),
        "--delta",
        "0.9",
        "--mode",
        "oracle",
    ]);
    assert_eq!(stdout(&o), "NO");
}

#[test]
fn bench_json_is_reproducible() {
    let args = ["bench", "--seed", "4", "--n", "4", "--trials", "3", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["instances"].as_array().unwrap().len(), 3);
    assert!(v["write_ratio"].as_f64().is_some());
    let o = run(&[
        "bench",
        "--seed",
        "4",
        "--n",
        "3",
        "--trials",
        "1",
        "--json",
        "--timings",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["instances"][0]["times"]["sweep_ms"].as_f64().is_some());
}

#[test]
fn trace_writes_snapshots() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let out = dir.path().join("trace");
    let o = run(&[
        "trace",
        "--pi",
        s(&a),
        "--sigma",
        s(&b),
        "--delta",
        "1.2",
        "--out",
        s(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let fsg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("fsg.json")).unwrap()).unwrap();
    assert_eq!(fsg["vertical"].as_array().unwrap().len(), 4);
    let pbm = std::fs::read_to_string(out.join("grid.pbm")).unwrap();
    assert!(pbm.starts_with("P1\n6 6\n"));
    assert!(std::fs::read_to_string(out.join("freespace.svg"))
        .unwrap()
        .starts_with("<svg"));
    assert!(out.join("events.jsonl").exists());
}

#[test]
fn tolerance_env_var_is_validated() {
    let dir = TempDir::new().unwrap();
    let (a, b) = example_a(dir.path());
    let o = bin()
        .args(["decide", "--pi", s(&a), "--sigma", s(&b), "--delta", "1"])
        .env("FRECHET_EPS", "0.5")
        .output()
        .unwrap();
    assert!(!o.status.success());
    let o = bin()
        .args(["decide", "--pi", s(&a), "--sigma", s(&b), "--delta", "1"])
        .env("FRECHET_EPS", "1e-7")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "YES");
}
