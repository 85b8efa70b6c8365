mod common;

use std::io::Write;
use std::process::{Command, Output, Stdio};

use common::BIN;

fn coach(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("COACH_DATA_DIR").output().unwrap()
}

fn session(dir: &std::path::Path, input: &str) -> String {
    let mut child = Command::new(BIN)
        .args(["session", "--trainee", "me"])
        .env("COACH_DATA_DIR", dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

#[test]
fn sim_writes_trajectory_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let out = coach(&["sim", "--profile", "A", "--weeks", "8", "--seed", "1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let rows = rows(&text);
    assert_eq!(rows.len(), 8);
    let volumes: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(volumes.windows(2).all(|w| w[0] <= w[1]), "{volumes:?}");
    assert_eq!(rows[0], ["1", "moderate", "10", "3", "90.0", "90.0", "3.00", "none"]);
}

#[test]
fn sim_prints_to_stdout() {
    let out = coach(&["sim", "--profile", "B", "--weeks", "8"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("week,goal_type,duration,frequency,goal_volume,performed_volume,mean_rpe,revision\n"));
    assert_eq!(rows(&text).len(), 8);
    assert!(text.contains("regress"));
}

#[test]
fn sim_rejects_unknown_profile() {
    let out = coach(&["sim", "--profile", "Z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("unknown profile"));
}

#[test]
fn sim_reports_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("a.csv");
    let out = coach(&["sim", "--profile", "A", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("cannot write"));
}

#[test]
fn sim_loads_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lazy.json");
    std::fs::write(
        &path,
        r#"{"name":"lazy","initial_choice_rule":"easiest","usual":{"compliance":0.3,"rpe":3,"miss_reason":"no_time"}}"#,
    )
    .unwrap();
    let out = coach(&["sim", "--profile", path.to_str().unwrap(), "--weeks", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows = rows(&text);
    assert_eq!(rows[0][..4], ["1", "moderate", "5", "3"]);
    assert_eq!(rows[0][5], "15.0");
    assert_eq!(rows[0][7], "regress");

    std::fs::write(&path, r#"{"name":"bad","usual":{"compliance":2.0,"rpe":3}}"#).unwrap();
    let out = coach(&["sim", "--profile", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn catalog_lists_goals() {
    let out = coach(&["catalog"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 72);
    let out = coach(&["catalog", "--capability", "900"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.ends_with("\t900\n"), "{text}");
}

#[test]
fn session_walks_through_a_week() {
    let dir = tempfile::tempdir().unwrap();
    let out = session(dir.path(), "0\n0\nx\n0\n0\n0\n0\n");
    assert!(out.contains("is not a valid number"));
    assert_eq!(out.matches("(Moderate").count(), 0);
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()) && l.contains(") ")).count(), 6);
    assert!(out.trim_end().ends_with("Progress saved."));

    let out = session(dir.path(), "2\ndone, rpe 3\n3 nope no time\nclose\nagree\nquit\n");
    assert!(out.contains("about 9 weeks"));
    assert!(out.contains("day 1: done"));
    assert!(out.contains("Tired, but can still talk"));
    assert!(out.contains("progress 1/3"));
    assert!(out.contains("Next week the coach proposes"));
    assert!(out.contains("Week 2:"));

    let out = coach(&["schedule", "--trainee", "me", "--data-dir", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let view: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(view["week_index"], 2);
    assert_eq!(view["days"].as_array().unwrap().len(), 7);
}
