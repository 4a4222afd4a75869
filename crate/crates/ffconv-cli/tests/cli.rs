//! End-to-end tests of the `ffconv` binary: file and inline input handling,
//! output formats, exit codes, and reproducibility of the campaign files.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ffconv"))
}

fn write(dir: &Path, name: &str, content: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

#[test]
fn convolve_unit_pair_gives_sqrt_two_roots() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"degree":2,"roots":[-1.0,1.0]}"#);
    let q = write(dir.path(), "q.json", r#"{"degree":2,"coeffs":[-1.0,0.0]}"#);
    let out = bin().arg("convolve").arg(&p).arg(&q).output().unwrap();
    let value = stdout_json(&out);
    assert_eq!(value["degree"], 2);
    let roots = value["roots"].as_array().unwrap();
    let expected = std::f64::consts::SQRT_2;
    assert!((roots[0].as_f64().unwrap() + expected).abs() < 1e-9);
    assert!((roots[1].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn convolve_output_reparses_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"degree":3,"roots":[-1.0,0.0,1.0]}"#);
    let round = dir.path().join("round.json");
    let out = bin()
        .arg("convolve")
        .arg(&p)
        .arg(&p)
        .arg("--out")
        .arg(&round)
        .output()
        .unwrap();
    assert!(out.status.success());
    // The written polynomial must be valid input for another command…
    let out = bin().arg("discriminant").arg(&round).output().unwrap();
    let report = stdout_json(&out);
    assert!(report["log_dis"].as_f64().unwrap() > 0.0);
    let text = std::fs::read_to_string(&round).unwrap();
    assert!(text.contains("\"roots\"") && text.contains("\"coeffs\""));
}

#[test]
fn convolving_with_shift_polynomial_translates_roots() {
    let out = bin()
        .args(["convolve", "--p-roots", "-1,1", "--q-roots", "1,1"])
        .output()
        .unwrap();
    let value = stdout_json(&out);
    let roots = value["roots"].as_array().unwrap();
    assert!(roots[0].as_f64().unwrap().abs() < 1e-9);
    assert!((roots[1].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn degree_mismatch_exits_3() {
    let out = bin()
        .args(["convolve", "--p-roots", "-1,1", "--q-roots", "1,2,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_real_rooted_exits_4() {
    let out = bin()
        .args(["convolve", "--p-coeffs", "1,0", "--q-roots", "0,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    let broken = write(dir.path(), "broken.json", "{ not json");
    let out = bin().arg("discriminant").arg(&broken).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Both keys are fine when consistent, rejected when they disagree.
    let both = write(
        dir.path(),
        "both.json",
        r#"{"degree":2,"roots":[-1.0,1.0],"coeffs":[-1.0,0.0]}"#,
    );
    let out = bin().arg("discriminant").arg(&both).output().unwrap();
    assert!(out.status.success());
    let inconsistent = write(
        dir.path(),
        "inconsistent.json",
        r#"{"degree":2,"roots":[-1.0,1.0],"coeffs":[-2.0,0.0]}"#,
    );
    let out = bin().arg("discriminant").arg(&inconsistent).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let short = write(dir.path(), "short.json", r#"{"degree":3,"roots":[-1.0,1.0]}"#);
    let out = bin().arg("discriminant").arg(&short).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = bin()
        .args(["entropy", "--roots", "1,two,3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conflicting_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "p.json", r#"{"degree":2,"roots":[-1.0,1.0]}"#);
    let out = bin()
        .arg("convolve")
        .arg(&p)
        .args(["--p-roots", "-1,1", "--q-roots", "0,2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn discriminant_anchor_values() {
    let out = bin()
        .args(["discriminant", "--roots", "-1,1"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((report["dis"].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!((report["entropy"].as_f64().unwrap() - 2.0f64.ln()).abs() < 1e-12);
    assert_eq!(report["method"], "root-pairs");

    let out = bin()
        .args([
            "discriminant",
            "--coeffs",
            "-1,-2",
            "--method",
            "derivative-product",
        ])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert!((report["dis"].as_f64().unwrap() - 8.0).abs() < 1e-9);
}

#[test]
fn polar_and_wronskian_outputs() {
    let out = bin().args(["polar", "--roots", "-1,0,1"]).output().unwrap();
    let value = stdout_json(&out);
    // ∂̇(x³−x) = −2x.
    assert_eq!(value["degree"], 1);
    assert_eq!(value["coeffs"][1].as_f64().unwrap(), -2.0);

    let out = bin()
        .args(["wronskian", "--p-roots", "-1,1", "--q-roots", "0,2"])
        .output()
        .unwrap();
    let value = stdout_json(&out);
    // W[x²−1, x²−2x] = −2x²+2x−2, strictly negative.
    assert_eq!(value["sign"], "nonpos");
    assert!(value["grid_max"].as_f64().unwrap() < 0.0);
}

#[test]
fn interlace_verdicts() {
    let out = bin()
        .args(["interlace", "--p-roots", "-1,1", "--q-roots", "0"])
        .output()
        .unwrap();
    let value = stdout_json(&out);
    assert_eq!(value["interlaces"], true);

    let out = bin()
        .args(["interlace", "--p-roots", "-1,1", "--q-roots", "5"])
        .output()
        .unwrap();
    let value = stdout_json(&out);
    assert_eq!(value["interlaces"], false);
}

#[test]
fn flow_base_case_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("trace.csv");
    let out = bin()
        .args(["flow", "--p-roots", "-1,1", "--q-roots", "0,2"])
        .args(["--steps", "400"])
        .arg("--out")
        .arg(&trace_path)
        .output()
        .unwrap();
    let summary = stdout_json(&out);
    // Dis(r_t) = 4(t+1): the final value is log 8.
    assert!((summary["final_log_dis"].as_f64().unwrap() - 8.0f64.ln()).abs() < 1e-6);
    assert_eq!(summary["log_dis_nondecreasing"], true);

    let csv = std::fs::read_to_string(&trace_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,lambda_1,lambda_2,f_1,f_2,log_dis");
    assert_eq!(csv.lines().count(), 402);
    for line in csv.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let (t, log_dis) = (fields[0], fields[5]);
        assert!(
            (log_dis - (4.0 * (t + 1.0)).ln()).abs() < 1e-6,
            "t = {t}: log_dis = {log_dis}"
        );
    }
}

#[test]
fn coarse_flow_still_emits_a_trace() {
    let out = bin()
        .args(["flow", "--p-roots", "-1,1", "--q-roots", "0,2"])
        .args(["--steps", "10"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().count(), 12);
}

#[test]
fn shift_class_flow_is_flat() {
    let out = bin()
        .args(["flow", "--p-roots", "-1,0.3,1.2", "--q-roots", "0.5,0.5,0.5"])
        .args(["--steps", "200", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let trace: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let log_dis = trace["log_dis"].as_array().unwrap();
    let first = log_dis[0].as_f64().unwrap();
    for v in log_dis {
        assert!((v.as_f64().unwrap() - first).abs() < 1e-9);
    }
}

#[test]
fn verify_suites_pass_and_report_seed() {
    for theorem in ["base", "general", "interlacing"] {
        let out = bin()
            .args(["verify", "--theorem", theorem, "--trials", "25", "--seed", "7"])
            .output()
            .unwrap();
        let report = stdout_json(&out);
        assert_eq!(report["seed"], 7, "{theorem}");
        assert_eq!(report["violations"], 0, "{theorem}");
    }
    let out = bin()
        .args(["verify", "--theorem", "flow", "--trials", "3", "--seed", "7"])
        .output()
        .unwrap();
    let report = stdout_json(&out);
    assert_eq!(report["violations"], 0);
}

#[test]
fn fuzz_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"master_seed":42,"trials":100}"#,
    );
    let prefix_a = dir.path().join("a").to_str().unwrap().to_string();
    let prefix_b = dir.path().join("b").to_str().unwrap().to_string();
    let out = bin()
        .arg("fuzz")
        .arg(&config)
        .args(["--out", &prefix_a])
        .output()
        .unwrap();
    let summary = stdout_json(&out);
    assert_eq!(summary["master_seed"], 42);
    assert_eq!(summary["summary"]["failures"], 0);

    let out = bin()
        .arg("fuzz")
        .arg(&config)
        .args(["--out", &prefix_b])
        .output()
        .unwrap();
    assert!(out.status.success());

    let a = std::fs::read(format!("{prefix_a}.jsonl")).unwrap();
    let b = std::fs::read(format!("{prefix_b}.jsonl")).unwrap();
    assert_eq!(a, b, "campaign records must be byte-identical across runs");
    let a_sum = std::fs::read(format!("{prefix_a}.summary.json")).unwrap();
    let b_sum = std::fs::read(format!("{prefix_b}.summary.json")).unwrap();
    assert_eq!(a_sum, b_sum);
}

#[test]
fn worker_cap_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "config.json",
        r#"{"master_seed":7,"trials":60}"#,
    );
    let free = dir.path().join("free").to_str().unwrap().to_string();
    let capped = dir.path().join("capped").to_str().unwrap().to_string();
    let out = bin()
        .arg("fuzz")
        .arg(&config)
        .args(["--out", &free])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .arg("fuzz")
        .arg(&config)
        .args(["--out", &capped])
        .env("FFCONV_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let a = std::fs::read(format!("{free}.jsonl")).unwrap();
    let b = std::fs::read(format!("{capped}.jsonl")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn malformed_fuzz_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "bad.json", r#"{"trials": "many"}"#);
    let out = bin().arg("fuzz").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let config = write(
        dir.path(),
        "invalid.json",
        r#"{"master_seed":1,"degree_range":[1,4]}"#,
    );
    let out = bin().arg("fuzz").arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
