use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.zipper"))
}

fn run(dir: &Path, args: &[&std::ffi::OsStr]) -> (Output, Value) {
    let report = dir.join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).arg("--report").arg(&report).output().unwrap();
    let json = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    (out, json)
}

macro_rules! args {
    ($($a:expr),* $(,)?) => { &[$(std::ffi::OsStr::new($a)),*] };
}

#[test]
fn validate_every_corpus_file() {
    let dir = tempfile::tempdir().unwrap();
    for name in
        ["linear-half", "linear-third", "koch", "koch-mirrored", "cesaro-050-030", "cesaro-040-024", "levy", "mixed"]
    {
        let path = corpus(name);
        let (out, report) = run(dir.path(), args!["validate", &path]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(report["results"]["valid"], true);
        assert_eq!(report["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn invalid_spec_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.zipper");
    let text =
        std::fs::read_to_string(corpus("linear-half")).unwrap().replace("translation = [0.5]", "translation = [0.6]");
    std::fs::write(&bad, text).unwrap();
    let (out, report) = run(dir.path(), args!["validate", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report["results"]["error"].as_str().unwrap().contains("residual"));
}

#[test]
fn render_counts_points() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("koch.svg");
    let (out, _) = run(dir.path(), args!["render", &corpus("koch"), "--depth", "6", "--out", &svg]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<polyline").count(), 1);
    let points = text.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
    assert_eq!(points.split(' ').count(), 4usize.pow(6) + 1);

    let csv = dir.path().join("levy.csv");
    let (out, _) = run(dir.path(), args!["render", &corpus("levy"), "--depth", "5", "--out", &csv]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 32 + 1);

    let (out, _) = run(dir.path(), args!["render", &corpus("koch"), "--out", &dir.path().join("koch.png")]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn analyze_exit_codes_follow_the_jordan_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run(dir.path(), args!["analyze", &corpus("levy"), "--depth", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report["results"]["jordan"]["verdict"]["kind"], "violation-at");
    for name in ["linear-half", "koch", "cesaro-050-030", "mixed"] {
        let (out, report) = run(dir.path(), args!["analyze", &corpus(name), "--depth", "5"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(report["results"]["turning"]["m_lower"]["status"], "lower-bound");
    }
}

#[test]
fn compare_linear_pair_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) =
        run(dir.path(), args!["compare", &corpus("linear-half"), &corpus("linear-third"), "--pairs", "2000"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &report["results"];
    assert!((r["holder"]["alpha"]["value"].as_f64().unwrap() - 0.584963).abs() < 1e-6);
    assert_eq!(r["scan"]["verdict"], "pass");
    assert_eq!(r["decision"]["decision"]["kind"], "bi-holder");
    assert_eq!(r["scan"]["forward"]["records"]["rows"].as_array().unwrap().len(), 2000);
}

#[test]
fn compare_rejects_non_arcs_and_map_count_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run(dir.path(), args!["compare", &corpus("levy"), &corpus("cesaro-050-030"), "--pairs", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report["results"]["verdict"], "not-isomorphic");
    let (out, _) = run(dir.path(), args!["compare", &corpus("koch"), &corpus("mixed"), "--pairs", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_refuses_non_attaining_index() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = run(dir.path(), args!["witness", &corpus("linear-half"), &corpus("linear-third")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["results"]["index"], 2);
    assert_eq!(report["results"]["equality_holds"], true);
    let (out, _) = run(dir.path(), args!["witness", &corpus("linear-half"), &corpus("linear-third"), "--index", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn reports_are_deterministic_apart_from_the_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let strip = |mut v: Value| {
        v["timestamp_unix"] = Value::Null;
        serde_json::to_string(&v).unwrap()
    };
    let (a, b) = (corpus("cesaro-050-030"), corpus("cesaro-040-024"));
    let args: &[&std::ffi::OsStr] = args!["compare", &a, &b, "--pairs", "300", "--seed", "5"];
    let (_, first) = run(dir.path(), args);
    let (_, second) = run(dir.path(), args);
    assert_eq!(strip(first.clone()), strip(second));
    // The thread count changes the command line but not the results.
    let (_, one_thread) = run(dir.path(), &[args, args!["--threads", "1"] as &[_]].concat());
    assert_eq!(first["results"], one_thread["results"]);
}
