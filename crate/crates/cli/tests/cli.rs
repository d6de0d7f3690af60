use std::process::{Command, Output};

use serde_json::Value;

const BEC_QUARTER: &str = r#"{"family":"erasure","parameter":0.25}"#;
const AD: &str = r#"{"family":"amplitude_damping","parameter":0.1}"#;

fn cqpolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqpolar"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = cqpolar(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn close(v: &Value, expected: f64) -> bool {
    (v.as_f64().unwrap() - expected).abs() < 1e-9
}

#[test]
fn channel_info_examples() {
    let v = json(&["channel-info", "--spec", BEC_QUARTER]);
    assert!(close(&v["holevo_bob"], 0.75));
    assert!(close(&v["holevo_eve"], 0.25));
    assert!(close(&v["coherent_info"], 0.5));
    let v = json(&[
        "channel-info",
        "--spec",
        r#"{"family":"amplitude_damping","parameter":0}"#,
    ]);
    assert!(close(&v["coherent_info"], 1.0));
    let v = json(&[
        "channel-info",
        "--spec",
        r#"{"family":"dephasing","parameter":0.5,"dephasing_axis":"Z"}"#,
    ]);
    assert!(close(&v["coherent_info"], 0.0));
}

#[test]
fn spec_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, BEC_QUARTER).unwrap();
    let v = json(&["channel-info", "--spec", path.to_str().unwrap()]);
    assert!(close(&v["coherent_info"], 0.5));
}

#[test]
fn polarize_rows() {
    let out = cqpolar(&[
        "polarize",
        "--spec",
        r#"{"family":"erasure","parameter":0.5}"#,
        "--n",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(values, [0.9375, 0.5625, 0.4375, 0.0625]);

    let out = cqpolar(&["polarize", "--spec", BEC_QUARTER, "--n", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);

    let v = json(&[
        "polarize",
        "--spec",
        r#"{"family":"dephasing","parameter":0.2,"dephasing_axis":"X"}"#,
        "--n",
        "3",
        "--mode",
        "fidelity_bounds",
        "--format",
        "json",
    ]);
    assert!(v["fractions"]["undecided"].as_f64().unwrap() >= 0.0);
}

#[test]
fn partition_examples() {
    let v = json(&[
        "partition",
        "--spec",
        r#"{"family":"erasure","parameter":0}"#,
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert!(close(&v["report"]["rate"], 1.0));
    let v = json(&[
        "partition",
        "--spec",
        BEC_QUARTER,
        "--n",
        "10",
        "--format",
        "json",
    ]);
    let r = &v["report"];
    let total: f64 = ["rate", "key_rate", "frozen_rate", "random_rate"]
        .iter()
        .map(|k| r[k].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(r["security_bound"].is_number() && r["reliability_bound"].is_number());
    assert_eq!(v["layout"].as_str().unwrap().len(), 1024);
}

#[test]
fn simulate_modes() {
    let v = json(&[
        "simulate",
        "--spec",
        AD,
        "--n",
        "3",
        "--trials",
        "300",
        "--seed",
        "5",
        "--mode",
        "quantum_sc",
    ]);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["trials"], 300);
    assert_eq!(v["within_bound"], true);

    let out = cqpolar(&[
        "simulate",
        "--spec",
        BEC_QUARTER,
        "--n",
        "4",
        "--trials",
        "50",
        "--mode",
        "classical_sc",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trial,error_flag");
    assert_eq!(lines.len(), 52);
    assert!(lines[51].starts_with("total,"));

    let v = json(&["simulate", "--spec", AD, "--n", "2", "--mode", "coherent"]);
    assert_eq!(v["bound_holds"], true);
    assert!(v["trace"]["final_fidelity"].as_f64().unwrap() <= 1.0);
}

#[test]
fn capacity_rows() {
    let out = cqpolar(&["capacity", "--spec", AD, "--grid", "0.1,0.55"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "parameter,q_true,ic_sym,ratio,status");
    assert!(lines[2].ends_with("non_degradable"));
}

#[test]
fn verify_suites_pass() {
    for suite in ["appendix_a", "appendix_b", "lemma1", "conservation"] {
        let v = json(&["verify", "--suite", suite, "--format", "json"]);
        assert_eq!(v["passed"], true, "{suite}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| cqpolar(args).status.code().unwrap();
    assert_eq!(
        code(&["partition", "--spec", BEC_QUARTER, "--blocklength", "6"]),
        2
    );
    assert_eq!(
        code(&[
            "channel-info",
            "--spec",
            r#"{"family":"erasure","parameter":2}"#
        ]),
        2
    );
    assert_eq!(code(&["channel-info", "--spec", "{not json"]), 2);
    assert_eq!(
        code(&["simulate", "--spec", AD, "--n", "4", "--mode", "coherent"]),
        3
    );
    assert_eq!(
        code(&[
            "verify",
            "--suite",
            "lemma1",
            "--spec",
            r#"{"family":"amplitude_damping","parameter":0.7}"#,
            "--n",
            "3",
        ]),
        4
    );
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("info.json");
    let args = ["channel-info", "--spec", AD];
    let stdout = cqpolar(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(cqpolar(&with_out).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}
