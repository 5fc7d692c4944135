use std::io::Write;
use std::process::{Command, Output, Stdio};

use sbchain::SimulationRecord;

fn sbchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sbchain"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn spec_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_swap_file() {
    let f = spec_file(r#"{"states":["a","b"],"matrix":[["0","1"],["1","0"]]}"#);
    let out = sbchain(&["analyze", "--chain", f.path().to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("ergodic: false"));
    assert!(text.contains("period: 2"));
    assert!(text.contains("stationary: 1/2 1/2"));
}

#[test]
fn analyze_reducible_file() {
    let f = spec_file(r#"{"states":["a","b"],"matrix":[["1","0"],["0","1"]]}"#);
    let out = sbchain(&[
        "analyze",
        "--chain",
        f.path().to_str().unwrap(),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["irreducible"], false);
    assert!(v["period"].is_null() && v["stationary"].is_null());
}

#[test]
fn analyze_exit_codes() {
    let bad_row = spec_file(r#"{"states":["a","b"],"matrix":[["1/2","1/2"],["1/3","1/3"]]}"#);
    let out = sbchain(&["analyze", "--chain", bad_row.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 1"));

    let float = spec_file(r#"{"states":["a"],"matrix":[[1.0]]}"#);
    let out = sbchain(&["analyze", "--chain", float.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("matrix row 0 entry 0"));

    let broken = spec_file("{\"states\": [\"a\"],\n \"matrix\": [[\"1\"]\n");
    let out = sbchain(&["analyze", "--chain", broken.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    assert_eq!(
        sbchain(&["analyze", "--chain", "/nonexistent/chain.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exact_table() {
    let out = sbchain(&["exact", "--n-max", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[1], "1\t1/2 1/2 0\t1/2 1/2 0\ttrue\t1/3");
    assert!(rows[3].starts_with("3\t3/8 3/8 1/4"));
    assert_eq!(sbchain(&["exact", "--n-max", "0"]).status.code(), Some(2));

    let out = sbchain(&["exact", "--n-max", "64", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 64);
    assert!(v.as_array().unwrap().iter().all(|r| r["equal"] == true));
}

#[test]
fn simulate_json_round_trips() {
    let out = sbchain(&[
        "simulate", "--seed", "7", "--n", "5000", "--stride", "1000", "--format", "json",
    ]);
    assert!(out.status.success());
    let record: SimulationRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record.total_experiments, 5000);
    assert_eq!(record.config.seed(), 7);
    assert_eq!(record.checkpoints.len(), 5);
    let reprinted = serde_json::to_string_pretty(&record).unwrap() + "\n";
    assert_eq!(reprinted, stdout(&out));
}

#[test]
fn simulate_single_experiment_and_bad_flags() {
    let text = stdout(&sbchain(&[
        "simulate", "--seed", "3", "--n", "1", "--stride", "1",
    ]));
    let awakenings = text.lines().find_map(|l| l.strip_prefix("awakenings: ")).unwrap();
    assert!(awakenings == "1" || awakenings == "2");
    assert_eq!(sbchain(&["simulate", "--n", "0"]).status.code(), Some(2));
    assert_eq!(sbchain(&["simulate", "--stride", "0"]).status.code(), Some(2));
    assert_eq!(sbchain(&["simulate", "--seed", "-1"]).status.code(), Some(2));
}

#[test]
fn convert_commands() {
    assert_eq!(stdout(&sbchain(&["convert", "encode", "H T"])), "MH MT TU\n");
    assert_eq!(
        stdout(&sbchain(&["convert", "decode", "M", "M", "TU", "--complete"])),
        "MH MT TU\n"
    );
    assert_eq!(stdout(&sbchain(&["convert", "project", "mh mt tu"])), "M M TU\n");
    assert_eq!(sbchain(&["convert", "decode", "TU M"]).status.code(), Some(2));
    assert_eq!(sbchain(&["convert", "encode", "H X"]).status.code(), Some(2));

    let mut child = Command::new(env!("CARGO_BIN_EXE_sbchain"))
        .args(["convert", "decode"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"M TU M\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(stdout(&out), "MT TU ?\n");
}
