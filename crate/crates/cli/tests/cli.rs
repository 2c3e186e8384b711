//! End-to-end tests of the `rectfit` binary: JSON output shapes, exit
//! codes, and error messages.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rectfit"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = binary()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn rectfit");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait for rectfit")
}

fn stdout_json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout line is JSON"))
        .collect()
}

const FIVE: &str = "1,2\n2,-3\n3,1\n4,-2\n5,4\n";

#[test]
fn fit_reports_the_optimal_rectangle() {
    let out = run_with_stdin(&["fit", "-"], FIVE);
    assert_eq!(out.status.code(), Some(0));
    let record = &stdout_json_lines(&out)[0];
    assert_eq!(record["n"], 5);
    assert_eq!(record["x1"], 1.0);
    assert_eq!(record["x2"], 4.0);
    assert_eq!(record["l0"], 2);
    assert_eq!(record["l1"], -4);
    assert_eq!(record["l2"], 4);
    assert_eq!(record["k"], 1);
    assert_eq!(record["m"], 4);
    assert_eq!(record["loss"], -4.0);
    assert_eq!(record["empty"], false);
}

#[test]
fn fit_algorithms_agree_on_the_same_input() {
    let want = stdout_json_lines(&run_with_stdin(&["fit", "-"], FIVE));
    for algorithm in ["brute", "iterative", "stream"] {
        let out = run_with_stdin(&["fit", "-", "--algorithm", algorithm], FIVE);
        assert_eq!(out.status.code(), Some(0), "algorithm {algorithm}");
        assert_eq!(stdout_json_lines(&out), want, "algorithm {algorithm}");
    }
}

#[test]
fn fit_accepts_files_headers_comments_and_whitespace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.csv");
    std::fs::write(&path, "score,loss\n# comment\n\n1 5\n").unwrap();
    let out = binary().arg("fit").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let record = &stdout_json_lines(&out)[0];
    assert_eq!(record["empty"], true);
    assert_eq!(record["x1"], "-inf");
    assert_eq!(record["x2"], "-inf");
    assert_eq!(record["l1"], 0);
    assert_eq!(record["l2"], 5);
}

#[test]
fn fit_modes_pick_integer_or_float_arithmetic() {
    let out = run_with_stdin(&["fit", "-"], "1,0.5\n2,-1.5\n");
    let record = &stdout_json_lines(&out)[0];
    assert_eq!(record["l1"], -1.5);

    let out = run_with_stdin(&["fit", "-", "--mode", "int"], "1,0.5\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("integer"), "stderr: {err}");

    let out = run_with_stdin(&["fit", "-", "--mode", "float"], FIVE);
    assert_eq!(stdout_json_lines(&out)[0]["l1"], -4.0);
}

#[test]
fn fit_levels_scale_the_reported_loss() {
    let out = run_with_stdin(&["fit", "-", "--q0", "-1", "--q1", "3"], "1,-2\n");
    let record = &stdout_json_lines(&out)[0];
    assert_eq!(record["q0"], -1.0);
    assert_eq!(record["q1"], 3.0);
    assert_eq!(record["loss"], -6.0);

    let out = run_with_stdin(&["fit", "-", "--q0", "2", "--q1", "1"], "1,-2\n");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn calibrate_prints_transformed_scores_and_a_fit_record() {
    let out = run_with_stdin(&["calibrate", "-"], "1 1\n2 0\n3 1\n");
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_json_lines(&out);
    assert_eq!(lines.len(), 3);
    let qs: Vec<f64> = lines.iter().map(|l| l["q"].as_f64().unwrap()).collect();
    assert_eq!(qs, vec![1.0, 0.0, 0.0]);
    let record: Value = serde_json::from_str(String::from_utf8_lossy(&out.stderr).trim()).unwrap();
    assert_eq!(record["l1"], -1.0);
    assert_eq!(record["x2"], 1.0);
}

#[test]
fn calibrate_applies_class_and_sample_weights() {
    // alpha 3 turns the lone positive into loss -3, outweighing both
    // negatives; their sample weights of 0.5 reduce the pull further.
    let out = run_with_stdin(
        &["calibrate", "-", "--alpha", "3"],
        "1 0 0.5\n2 1 1\n3 0 0.5\n",
    );
    assert_eq!(out.status.code(), Some(0));
    let qs: Vec<f64> = stdout_json_lines(&out)
        .iter()
        .map(|l| l["q"].as_f64().unwrap())
        .collect();
    assert_eq!(qs, vec![0.0, 1.0, 0.0]);
}

#[test]
fn stream_emits_running_records_with_merge_counts() {
    let out = run_with_stdin(&["stream", "-"], "5 -1\n4 -1\n");
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_json_lines(&out);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["n"], 1);
    assert_eq!(lines[0]["l1"], -1);
    assert_eq!(lines[1]["n"], 2);
    assert_eq!(lines[1]["l1"], -2);
    assert_eq!(lines[1]["x1"], "-inf");
    assert_eq!(lines[1]["x2"], 5.0);
    assert!(lines[1]["merges"].as_u64().is_some());

    let out = run_with_stdin(&["stream", "-", "--every", "3"], FIVE);
    let lines = stdout_json_lines(&out);
    // Inserts 3 and 5 (the last) report.
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["n"], 3);
    assert_eq!(lines[1]["n"], 5);
    assert_eq!(lines[1]["l1"], -4);

    // By default one record per row, and the last one matches `fit` up to
    // the merge counter.
    let fit = stdout_json_lines(&run_with_stdin(&["fit", "-"], FIVE));
    let stream = stdout_json_lines(&run_with_stdin(&["stream", "-"], FIVE));
    assert_eq!(stream.len(), 5);
    let mut last = stream.last().unwrap().clone();
    last.as_object_mut().unwrap().remove("merges");
    assert_eq!(last, fit[0]);
}

#[test]
fn json_rows_parse_like_delimited_rows() {
    let jsonl = concat!(
        "{\"x\": 1, \"z\": 2}\n",
        "{\"x\": 2, \"z\": -3}\n",
        "{\"x\": 3, \"z\": 1}\n",
        "{\"x\": 4, \"z\": -2}\n",
        "{\"x\": 5, \"z\": 4}\n",
    );
    let want = stdout_json_lines(&run_with_stdin(&["fit", "-"], FIVE));
    let got = stdout_json_lines(&run_with_stdin(&["fit", "-"], jsonl));
    assert_eq!(got, want);

    // Integer detection mirrors the token rule: 2.5 is not exact.
    let out = run_with_stdin(&["fit", "-", "--mode", "int"], "{\"x\": 1, \"z\": 2.5}\n");
    assert_eq!(out.status.code(), Some(1));

    let out = run_with_stdin(
        &["calibrate", "-", "--alpha", "3"],
        concat!(
            "{\"x\": 1, \"y\": 0, \"w\": 0.5}\n",
            "{\"x\": 2, \"y\": 1, \"w\": 1}\n",
            "{\"x\": 3, \"y\": 0, \"w\": 0.5}\n",
        ),
    );
    assert_eq!(out.status.code(), Some(0));
    let qs: Vec<f64> = stdout_json_lines(&out)
        .iter()
        .map(|l| l["q"].as_f64().unwrap())
        .collect();
    assert_eq!(qs, vec![0.0, 1.0, 0.0]);

    // Malformed objects and missing keys cite their line.
    let out = run_with_stdin(&["fit", "-"], "{\"x\": 1, \"z\": 2}\n{\"x\": oops}\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = run_with_stdin(&["fit", "-"], "{\"x\": 1}\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"z\""));
}

#[test]
fn bench_cross_checks_and_exits_zero_on_agreement() {
    let out = binary()
        .args(["bench", "--n", "64", "--instances", "2", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lines = stdout_json_lines(&out);
    assert_eq!(lines.len(), 2);
    for line in &lines {
        assert_eq!(line["agree"], true);
        assert_eq!(line["n"], 64);
        assert!(line["counters"]["linear_ops"].as_u64().unwrap() <= 5 * 64);
        assert!(line["timings_ns"]["stream"].as_u64().is_some());
    }
    assert_eq!(lines[0]["seed"], 7);
    assert_eq!(lines[1]["seed"], 8);

    let out = binary().args(["bench", "--n", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = binary()
        .args(["bench", "--instances", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn errors_cite_line_numbers_and_exit_one() {
    let out = run_with_stdin(&["fit", "-"], "1,2\nfoo,bar\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 2"), "stderr: {err}");

    let out = run_with_stdin(&["fit", "-"], "NaN,1\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("line 1"), "stderr: {err}");

    let out = run_with_stdin(&["fit", "-"], "1,2,3\n");
    assert_eq!(out.status.code(), Some(1));

    let out = run_with_stdin(&["fit", "-"], "");
    assert_eq!(out.status.code(), Some(1));

    let out = run_with_stdin(&["calibrate", "-"], "1 2\n");
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("label"), "stderr: {err}");
}

#[test]
fn missing_files_and_bad_flags_exit_one_help_exits_zero() {
    let out = binary()
        .args(["fit", "/nonexistent/scores.csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/scores.csv"));

    let out = binary().args(["fit", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = binary().output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = binary().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("rectfit"));

    let out = binary().arg("--version").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
