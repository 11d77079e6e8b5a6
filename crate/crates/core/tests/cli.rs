use std::path::Path;
use std::process::{Command, Output};

use elecflow::cli::{parse_dimacs, write_dimacs, EXIT_DISCONNECTED, EXIT_FAIL, EXIT_OK, EXIT_PARSE};
use elecflow::generate::{random_connected, rng};
use proptest::prelude::*;
use serde_json::Value;

const REPORT_KEYS: [&str; 21] = [
    "algorithm",
    "epsilon",
    "n",
    "m",
    "flow_value_found",
    "target_value",
    "guarantee",
    "feasible",
    "max_congestion",
    "cut_capacity",
    "cut_source_side",
    "iterations",
    "oracle_calls",
    "linear_solves",
    "probes",
    "forbidden_edges",
    "forbidden_capacity",
    "checks",
    "violations",
    "wall_ms",
    "error",
];

fn elecflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elecflow")).args(args).output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn report_has_every_key() {
    for alg in ["simple", "improved", "cut", "exact"] {
        let out = elecflow(&["--gen", "random:n=8,m=14", "--seed", "3", "--algorithm", alg, "--epsilon", "0.1"]);
        assert_eq!(out.status.code(), Some(EXIT_OK), "{alg}: {}", String::from_utf8_lossy(&out.stderr));
        let v = report(&out);
        let obj = v.as_object().unwrap();
        for key in REPORT_KEYS {
            assert!(obj.contains_key(key), "{alg} missing {key}");
        }
        assert_eq!(obj.len(), REPORT_KEYS.len());
        assert_eq!(v["algorithm"], alg);
        assert!(v["error"].is_null());
    }
}

#[test]
fn exact_matches_small_instance() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "diamond.max",
        "c diamond\np max 4 4\nn 1 s\nn 4 t\na 1 2 1\na 1 3 2\na 2 4 2\na 3 4 1\n",
    );
    let v = report(&elecflow(&[&file, "--algorithm", "exact"]));
    assert_eq!(v["flow_value_found"].as_f64(), Some(2.0));
    assert_eq!(v["cut_capacity"].as_f64(), Some(2.0));

    let v = report(&elecflow(&[&file, "--algorithm", "simple", "--epsilon", "0.1"]));
    assert_eq!(v["feasible"], true);
    let found = v["flow_value_found"].as_f64().unwrap();
    assert!((1.0..=2.0 + 1e-9).contains(&found));
    assert!(v["max_congestion"].as_f64().unwrap() <= 1.0 + 1e-6);

    let v = report(&elecflow(&[&file, "--algorithm", "cut", "--epsilon", "0.1"]));
    let cap = v["cut_capacity"].as_f64().unwrap();
    assert!(cap >= 2.0);
    assert_eq!(v["cut_source_side"].as_array().unwrap()[0], 0);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.max", "p max 2 1\nn 1 s\nn 2 t\na 1 2 zero\n");
    let out = elecflow(&[&bad]);
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));

    let split = write(dir.path(), "split.max", "p max 4 2\nn 1 s\nn 4 t\na 1 2 3\na 3 4 3\n");
    let out = elecflow(&[&split]);
    assert_eq!(out.status.code(), Some(EXIT_DISCONNECTED));
    assert!(report(&out)["error"].is_string());

    let out = elecflow(&["--gen", "paths:k=3", "--flow-value", "40", "--epsilon", "0.2"]);
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    assert_ne!(report(&out)["feasible"], true);

    let out = elecflow(&["--gen", "paths:k=3", "--epsilon", "0.9"]);
    assert_eq!(out.status.code(), Some(EXIT_PARSE));

    let out = elecflow(&["--gen", "nonsense:x=1"]);
    assert_eq!(out.status.code(), Some(EXIT_PARSE));

    let out = elecflow(&[]);
    assert_eq!(out.status.code(), Some(EXIT_PARSE));
}

#[test]
fn output_trace_and_instance_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let trace_path = dir.path().join("trace.jsonl");
    let inst_path = dir.path().join("inst.max");
    let out = elecflow(&[
        "--gen",
        "random:n=10,m=20",
        "--seed",
        "9",
        "--instrument",
        "--output",
        out_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
        "--write-instance",
        inst_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert!(v["checks"].as_u64().unwrap() > 0);
    assert_eq!(v["violations"].as_u64(), Some(0));

    let trace = std::fs::read_to_string(&trace_path).unwrap();
    let kinds: Vec<String> = trace
        .lines()
        .map(|l| serde_json::from_str::<Value>(l).unwrap()["kind"].as_str().unwrap().to_owned())
        .collect();
    assert!(kinds.iter().any(|k| k == "probe"), "{kinds:?}");
    assert!(kinds.len() > 1);

    let g = parse_dimacs(&std::fs::read_to_string(&inst_path).unwrap()).unwrap();
    assert_eq!((g.n(), g.m()), (10, 20));
    let again = report(&elecflow(&[inst_path.to_str().unwrap(), "--algorithm", "exact"]));
    let direct = report(&elecflow(&["--gen", "random:n=10,m=20", "--seed", "9", "--algorithm", "exact"]));
    assert_eq!(again["flow_value_found"], direct["flow_value_found"]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn dimacs_round_trip(n in 2usize..15, extra in 0usize..30, seed in any::<u64>()) {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        let g = random_connected(n, m, &mut rng(seed)).unwrap();
        let back = parse_dimacs(&write_dimacs(&g)).unwrap();
        prop_assert_eq!(back, g);
    }
}
