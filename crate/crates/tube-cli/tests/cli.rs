use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tube")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

#[test]
fn same_config_same_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "p.conf",
        "scenario = verify_properties\nspace = metric_tree\ncases = 40\npairs = 200\nseed = 9\n",
    );
    let mut bodies = Vec::new();
    for run in ["a", "b"] {
        let out = tmp.path().join(run);
        let o = tube(&["run", &cfg, "--out-dir", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        bodies.push(std::fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn malformed_config_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    for body in [
        "scenario reconstruct_flat\n",
        "scenario = reconstruct_flat\nspace = euclidean\ncolour = red\n",
        "scenario = reconstruct_flat\nspace = hyperbolic\n",
        "scenario = tape_demo\nspace = euclidean\ntolerance = -1\n",
        "space = euclidean\n",
    ] {
        let cfg = write_config(tmp.path(), "bad.conf", body);
        let o = tube(&["run", &cfg, "--out-dir", tmp.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("config error"), "{body}");
    }
    assert!(!tmp.path().join("report.json").exists());
    let o = tube(&["run", "/nonexistent/x.conf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_suite_exits_1_with_report() {
    let tmp = tempfile::tempdir().unwrap();
    // a scissors height bound this small leaves no usable displacement
    let cfg = write_config(tmp.path(), "r.conf", "scenario = reconstruct_rankone\nspace = hyperbolic\ncases = 2\noffset = 1e-9\n");
    let o = tube(&["run", &cfg, "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(tmp.path());
    assert_eq!(r["passed"], Value::Bool(false));
    assert_eq!(r["cases"].as_array().unwrap().len(), 2);
}

#[test]
fn flat_report_is_self_consistent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "f.conf", "scenario = reconstruct_flat\nspace = euclidean\ncases = 6\nseed = 4\n");
    let o = tube(&["run", &cfg, "--out-dir", tmp.path().to_str().unwrap(), "--seed", "5", "--tolerance", "1e-5"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(tmp.path());
    assert_eq!(r["config"]["seed"], "5");
    assert_eq!(r["config"]["tolerance"], "1e-5");
    let mut calls = 0;
    for c in r["cases"].as_array().unwrap() {
        let (v, t, e) = (c["value"].as_f64().unwrap(), c["truth"].as_f64().unwrap(), c["error"].as_f64().unwrap());
        assert_eq!((v - t).abs(), e);
        assert!(e <= 1e-5);
        assert!(c["wall_ms"].is_null());
        calls += c["oracle_calls"].as_u64().unwrap();
    }
    assert!(calls > 0);
    assert_eq!(r["oracle_calls"].as_u64().unwrap(), calls);
}

#[test]
fn tape_csv_has_every_sequence_point() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "t.conf", "scenario = tape_demo\nspace = euclidean\norder = 3\ntape_window = 4\n");
    let o = tube(&["run", &cfg, "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let plots = tmp.path().join("plots");
    let o = tube(&["plot", tmp.path().join("report.json").to_str().unwrap(), "tape", "--out-dir", plots.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(plots.join("tape.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "i,j,z,u,t");
    // 4p sequences, 2m + 1 points each
    assert_eq!(rows.len() - 1, 4 * 3 * 9);
}

#[test]
fn scissors_plots_and_error_curve() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "s.conf",
        "scenario = scissors_demo\nspace = hyperbolic\ncases = 2\niterations = 1000\nplots = error_curve, scissors\n",
    );
    let o = tube(&["run", &cfg, "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let curve = std::fs::read_to_string(tmp.path().join("error_curve.csv")).unwrap();
    let mut lines = curve.lines();
    assert_eq!(lines.next(), Some("n,error"));
    for l in lines {
        let (n, e) = l.split_once(',').unwrap();
        let (n, e): (f64, f64) = (n.parse().unwrap(), e.parse().unwrap());
        assert!(e >= -1e-8 && e < 1.0 / n, "{l}");
    }
    let sc = std::fs::read_to_string(tmp.path().join("scissors.csv")).unwrap();
    assert!(sc.starts_with("scissors,line,s,x,y\n"));
    for l in sc.lines().skip(1) {
        let f: Vec<&str> = l.split(',').collect();
        let (x, y): (f64, f64) = (f[3].parse().unwrap(), f[4].parse().unwrap());
        assert!(x * x + y * y < 1.0);
    }
}

#[test]
fn plot_needs_the_geometry() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty.json");
    std::fs::write(&empty, "{}").unwrap();
    for what in ["tape", "scissors", "error_curve"] {
        let o = tube(&["plot", empty.to_str().unwrap(), what]);
        assert_eq!(o.status.code(), Some(2), "{what}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("no "), "{what}");
    }
    let o = tube(&["plot", empty.to_str().unwrap(), "histogram"]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(&empty, "not json").unwrap();
    assert_eq!(tube(&["plot", empty.to_str().unwrap(), "tape"]).status.code(), Some(2));
}
