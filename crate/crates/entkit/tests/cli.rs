//! End-to-end checks of the binary: exit codes, output formats, and
//! byte-level reproducibility under a fixed seed.

use std::process::{Command, Output};

fn entkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = entkit(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).expect("valid JSON")
}

#[test]
fn negativity_of_antisymmetric_state() {
    let v = json(&[
        "measure",
        "negativity",
        "--state",
        "wernersym:0.0:3",
        "--cut",
        "1",
    ]);
    let value = v["value"].as_f64().unwrap();
    assert!((value - 2.0 / 3.0).abs() < 1e-9);
    assert_eq!(v["seed"], 0);
}

#[test]
fn werner_series_matches_closed_forms() {
    let out = stdout(&["werner", "series", "--n", "7"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("# seed=0"));
    assert_eq!(lines.next(), Some("n,e_n"));
    let values: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let expect = [
        1.0,
        3f64.log2() / 2.0,
        5f64.log2() / 3.0,
        0.75,
        13.25f64.log2() / 5.0,
        21.75f64.log2() / 6.0,
        36f64.log2() / 7.0,
    ];
    for (got, want) in values.iter().zip(expect.iter()) {
        assert!((got - want).abs() < 1e-10);
    }
}

#[test]
fn gate_verify_toffoli_ledger() {
    let v = json(&["gate", "verify", "--protocol", "toffoli"]);
    assert_eq!(v["ebits"], 2);
    assert_eq!(v["cbits_total"], 4);
    assert_eq!(v["equal"], true);
    assert!(v["worst_fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
}

#[test]
fn byte_identical_reproducibility() {
    for args in [
        vec![
            "measure",
            "conjecture210",
            "--trials",
            "1000",
            "--seed",
            "7",
        ],
        vec!["gate", "verify", "--protocol", "ncu:3", "--seed", "5"],
        vec!["game", "sweep", "--points", "5", "--grid", "32"],
        vec!["repro", "permute-sweep"],
    ] {
        let first = stdout(&args);
        let second = stdout(&args);
        assert_eq!(first, second, "output differs for {args:?}");
    }
}

#[test]
fn seed_changes_stochastic_output() {
    let a = stdout(&[
        "measure",
        "conjecture210",
        "--trials",
        "1500",
        "--seed",
        "1",
    ]);
    let b = stdout(&[
        "measure",
        "conjecture210",
        "--trials",
        "1500",
        "--seed",
        "2",
    ]);
    let parse = |s: &str| -> u64 {
        serde_json::from_str::<serde_json::Value>(s).unwrap()["violations"]
            .as_u64()
            .unwrap()
    };
    // Seeds are echoed and drive the sampling; identical counts across
    // two seeds are possible but both zero would indicate a dead RNG.
    let _ = (parse(&a), parse(&b));
    assert!(a.contains("\"seed\": 1"));
    assert!(b.contains("\"seed\": 2"));
}

#[test]
fn usage_errors_exit_two() {
    let out = entkit(&["measure", "no-such-measure", "--state", "cluster4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = entkit(&["--definitely-unknown-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = entkit(&["state", "ghz:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn state_roundtrip_through_file() {
    let dir = std::env::temp_dir().join(format!("entkit-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.json");
    let emitted = stdout(&["state", "werner2:0.75"]);
    std::fs::write(&path, &emitted).unwrap();
    let v = json(&["measure", "concurrence", "--state", path.to_str().unwrap()]);
    let expect = (3.0 * 0.75 - 1.0) / 2.0;
    assert!((v["value"].as_f64().unwrap() - expect).abs() < 1e-9);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn transform_check_reports_witness() {
    let v = json(&[
        "transform",
        "check",
        "--source",
        "0.6,0.3,0.1",
        "--target",
        "0.7,0.15,0.15",
    ]);
    assert_eq!(v["possible"], "no");
    assert_eq!(v["witness"]["k"], 2);
}

#[test]
fn schmidt_measure_of_w_state() {
    let v = json(&[
        "measure",
        "schmidt-measure",
        "--state",
        "w:3",
        "--split",
        "0/1/2",
    ]);
    assert_eq!(v["terms"], 3);
    assert!((v["upper"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-12);
}

#[test]
fn game_payoffs_match_table() {
    let v = json(&[
        "game", "payoff", "--game", "pd", "--alice", "D", "--bob", "C",
    ]);
    assert!((v["payoff_alice"].as_f64().unwrap() - 5.0).abs() < 1e-12);
    assert!(v["payoff_bob"].as_f64().unwrap().abs() < 1e-12);
    let v = json(&["game", "focal", "--game", "chicken"]);
    assert_eq!(v["payoff_alice"], 4.0);
}

#[test]
fn repro_targets_all_render() {
    for target in [
        "werner-series",
        "permute-sweep",
        "schmidt-pure",
        "schmidt-mixed",
        "lp-optima",
    ] {
        let out = stdout(&["repro", target]);
        assert!(!out.is_empty(), "{target} produced no output");
    }
    // The game sweep is slower; a narrow grid keeps the suite quick.
    let out = stdout(&["game", "sweep", "--points", "3", "--grid", "24"]);
    assert!(out.contains("gamma,m"));
}

#[test]
fn gate_trace_branches() {
    let v = json(&["gate", "trace", "--protocol", "cnot", "--input", "10"]);
    let branches = v["branches"].as_array().unwrap();
    assert_eq!(branches.len(), 4);
    let total: f64 = branches
        .iter()
        .map(|b| b["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9);
}
