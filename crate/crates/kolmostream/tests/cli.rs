//! Black-box tests of the `kolmostream` binary: exit codes, error messages,
//! stream parsing, and deterministic experiment output.

use std::io::Write;
use std::process::{Command, Stdio};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kolmostream"));
    // keep output byte-stable regardless of the build machine's terminal
    cmd.env("NO_COLOR", "1");
    cmd
}

fn stdout_of(output: &std::process::Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &std::process::Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn accept_and_reject_exit_codes() {
    let accept = bin()
        .args(["test", "--eps", "0.1", "--delta", "0.1", "--generate", "7"])
        .output()
        .unwrap();
    assert_eq!(
        accept.status.code(),
        Some(0),
        "stderr: {}",
        stderr_of(&accept)
    );
    assert!(stdout_of(&accept).contains("decision: accept"));

    let reject = bin()
        .args([
            "test",
            "--eps",
            "0.1",
            "--delta",
            "0.1",
            "--generate",
            "7",
            "--from",
            r#"{"kind":"wedge-perturbed","params":{"eps":0.2,"center":0.5}}"#,
        ])
        .output()
        .unwrap();
    assert_eq!(reject.status.code(), Some(1));
    let text = stdout_of(&reject);
    assert!(text.contains("decision: reject"));
    assert!(
        text.contains("witness: bucket"),
        "missing witness line: {text}"
    );
    assert!(!text.contains('\x1b'), "color codes despite NO_COLOR");
}

#[test]
fn stdin_stream_accepts_balanced_grid() {
    let mut child = bin()
        .args(["test", "--eps", "0.1", "--delta", "0.1", "--stream", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    {
        let stdin = child.stdin.as_mut().unwrap();
        for k in 0..400 {
            writeln!(stdin, "{}", ((k % 100) as f64 + 0.5) / 100.0).unwrap();
        }
    }
    let output = child.wait_with_output().unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        stderr_of(&output)
    );
    assert!(stdout_of(&output).contains("samples: 400 consumed, 400 fetched"));
}

#[test]
fn short_stream_reports_exact_shortfall() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.txt");
    let mut lines = String::new();
    for k in 0..50 {
        lines.push_str(&format!("{}\n", (k as f64 + 0.5) / 50.0));
    }
    std::fs::write(&path, lines).unwrap();
    let output = bin()
        .args(["test", "--eps", "0.1", "--delta", "0.1", "--stream"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("InsufficientSamples: needed 400, got 50"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn malformed_line_is_reported_with_its_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "0.25\n0.5\nnot-a-number\n0.75\n").unwrap();
    let output = bin()
        .args(["test", "--eps", "0.1", "--delta", "0.1", "--stream"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("ParseError at line 3"),
        "stderr: {}",
        stderr_of(&output)
    );
}

#[test]
fn experiment_csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.json");
    std::fs::write(
        &plan,
        r#"{
            "eps": 0.1, "delta": 0.1, "mode": "practical",
            "alt_models": [{"model": {"kind": "wedge-perturbed", "params": {"eps": 0.2, "center": 0.5}}, "distance": 0.2}],
            "trials": 8, "base_seed": 99
        }"#,
    )
    .unwrap();
    let run = |out: &std::path::Path| {
        let output = bin()
            .arg("experiment")
            .arg("--plan")
            .arg(&plan)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(
            output.status.code(),
            Some(0),
            "stderr: {}",
            stderr_of(&output)
        );
        std::fs::read(out).unwrap()
    };
    let first = run(&dir.path().join("a.csv"));
    let second = run(&dir.path().join("b.csv"));
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("trial,hypothesis,distance,decision,samples,peak_words\n"));
    assert_eq!(text.lines().count(), 1 + 16 + 2);
}

#[test]
fn lemma_check_flags_a_pair_with_no_separating_bucket() {
    let ok = bin()
        .args(["lemma-check", "--eps", "0.1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "stderr: {}", stderr_of(&ok));

    // identical models labeled as distant: the scan must come up empty and
    // the command must signal it
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.json");
    std::fs::write(
        &pairs,
        r#"[{
            "name": "mislabeled",
            "unknown": {"kind": "uniform-unit"},
            "reference": {"kind": "uniform-unit"},
            "distance": 0.5
        }]"#,
    )
    .unwrap();
    let output = bin()
        .args(["lemma-check", "--eps", "0.1", "--pairs"])
        .arg(&pairs)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_of(&output).contains("NO WITNESS"));
}

#[test]
fn ks_baseline_decides_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.txt");
    let mut lines = String::new();
    for k in 0..1000 {
        lines.push_str(&format!("{}\n", (k as f64 + 0.5) / 1000.0));
    }
    std::fs::write(&path, lines).unwrap();
    let output = bin()
        .args(["ks-baseline", "--delta", "0.1", "--stream"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(0),
        "stderr: {}",
        stderr_of(&output)
    );
    let text = stdout_of(&output);
    assert!(text.contains("n: 1000"));
    assert!(text.contains("dkw threshold (delta 0.1): 0.038702"));
}

#[test]
fn json_output_is_a_single_parseable_object() {
    let output = bin()
        .args([
            "test",
            "--eps",
            "0.1",
            "--delta",
            "0.1",
            "--generate",
            "7",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(stdout_of(&output).trim()).unwrap();
    assert_eq!(parsed["decision"], "accept");
    assert_eq!(parsed["samples_consumed"], 400);
    assert_eq!(parsed["peak_live_words"], 3050);
    assert!(parsed["witness"].is_null());
}
