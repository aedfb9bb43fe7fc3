use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hgmst::harness::{
    generate_instance, parse_instance, random_instance, run_experiment, write_instance, GeneratorParams,
    HISTOGRAM_CSV, ITERATIONS_CSV,
};
use hgmst::bnc::SolverConfig;
use hgmst::pool::ExperimentMode;
use proptest::prelude::*;

const GADGET: &str = "HGMST 1\n3 4\n2 0 1 1.0\n2 1 2 1.0\n2 0 2 1.0\n3 0 1 2 1.9\n";

fn hgmst(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgmst")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn solve_json_reports_gadget_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gadget.hg", GADGET);
    let out = hgmst(&["solve", &file, "--json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "optimal");
    assert!((v["objective"].as_f64().unwrap() - 1.9).abs() < 1e-9);
    assert_eq!(v["tree"], serde_json::json!([3]));
    assert_eq!(v["edges"], serde_json::json!([["0", "1", "2"]]));
    assert!(v["stats"]["histogram"].is_object());
}

#[test]
fn solve_keeps_symbolic_labels() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "named.hg", "HGMST 1\n3 2\n2 b a 1\n2 a c 2\n");
    let out = hgmst(&["solve", &file]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("objective: 3"));
    assert!(text.contains("edge: b a") && text.contains("edge: a c"));
}

#[test]
fn verify_prints_ok() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gadget.hg", GADGET);
    let out = hgmst(&["verify", &file]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("OK 1.9"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(hgmst(&["solve", "--no-such-flag"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.hg", "HGMST 1\n3 1\n2 0 1 x\n");
    let out = hgmst(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(hgmst(&["solve", "/nonexistent/file.hg"]).status.code(), Some(2));
    let no_tree = write(dir.path(), "cover.hg", "HGMST 1\n4 2\n3 0 1 2 1\n3 1 2 3 1\n");
    assert_eq!(hgmst(&["solve", &no_tree]).status.code(), Some(1));
}

#[test]
fn generate_writes_a_parsable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.hg");
    let out = hgmst(&["generate", "--n", "25", "--seed", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let h = parse_instance(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(h, generate_instance(3, 25, &GeneratorParams::default()).unwrap());
}

#[test]
fn experiment_writes_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = hgmst(&[
        "experiment",
        "--n",
        "20",
        "--count",
        "2",
        "--modes",
        "both,small",
        "--out-dir",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let iterations = fs::read_to_string(out_dir.join(ITERATIONS_CSV)).unwrap();
    let mut lines = iterations.lines();
    assert_eq!(lines.next(), Some("instance,mode,iterations,time_ms"));
    assert_eq!(lines.count(), 4);
    let hist = fs::read_to_string(out_dir.join(HISTOGRAM_CSV)).unwrap();
    assert!(hist.starts_with("instance,mode,k,count\n"));
}

#[test]
fn experiments_are_deterministic_apart_from_timing() {
    let params = GeneratorParams::default();
    let instances: Vec<_> = (0..3)
        .map(|s| (format!("i{s}"), generate_instance(s, 30, &params).unwrap()))
        .collect();
    let modes = [ExperimentMode::Both, ExperimentMode::Large, ExperimentMode::Small];
    let strip = |mut rs: Vec<hgmst::harness::ExperimentRecord>| {
        for r in &mut rs {
            r.time_ms = 0.0;
        }
        rs
    };
    let a = strip(run_experiment(&instances, &modes, &SolverConfig::default(), None).unwrap());
    let b = strip(run_experiment(&instances, &modes, &SolverConfig::default(), None).unwrap());
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn instance_text_round_trips(n in 2usize..12, m in 1usize..20, integral: bool, seed: u64) {
        let h = random_instance(n, m, integral, seed).unwrap();
        let text = write_instance(&h);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &h);
        prop_assert_eq!(write_instance(&back), text);
    }
}
