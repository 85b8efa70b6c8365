mod common;

use std::thread;

use common::Server;
use reqwest::StatusCode;
use serde_json::{json, Value};

fn zero_assessment() -> Value {
    json!({})
}

fn moderate(d: u32, f: u32) -> Value {
    json!({ "exercise": "moderate", "duration_min": d, "frequency": f })
}

fn sessions(schedule: &Value) -> Vec<u64> {
    schedule["days"]
        .as_array()
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, d)| d["kind"] == "session")
        .map(|(i, _)| i as u64)
        .collect()
}

#[test]
fn health_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    assert_eq!(server.ok(server.get("/health"))["status"], "ok");
}

#[test]
fn first_week_flow() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let id = server.create();
    let t = |p: &str| format!("/trainees/{id}{p}");

    let choices = server.ok(server.post(&t("/assessment"), zero_assessment()));
    assert_eq!(choices["exercise"], "moderate");
    assert_eq!(choices["frequency"], 3);
    assert_eq!(choices["goals"].as_array().unwrap().len(), 6);

    let chosen = server.ok(server.post(&t("/goal-choice"), moderate(10, 3)));
    assert_eq!(chosen["projected_weeks"], 9);
    assert_eq!(chosen["model"]["span"], 9);
    assert_eq!(sessions(&chosen["week_schedule"]), vec![1, 3, 5]);

    let view = server.ok(server.get(&t("/schedule?today=0")));
    assert_eq!(view["days"].as_array().unwrap().len(), 7);
    assert_eq!(view["progress"], json!({ "done_count": 0, "frequency": 3, "goal_volume": 90.0 }));
    let view = server.ok(server.get(&t("/schedule")));
    assert_eq!(view["today"], 0);

    let week = server.ok(server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 1, "status": "done", "rpe": 3 })));
    assert_eq!(week["days"][1]["status"], "done");
    let dup = server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 1, "status": "done", "rpe": 3 }));
    assert_eq!(dup.status(), StatusCode::CONFLICT);
    let rest = server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 2, "status": "done", "rpe": 3 }));
    assert_eq!(rest.status(), StatusCode::UNPROCESSABLE_ENTITY);
    let bad = server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 3, "status": "done" }));
    assert!(bad.status().is_client_error());

    let week = server.ok(server.post(
        &t("/reports"),
        json!({ "week_index": 1, "day_index": 3, "status": "nope", "reason": "no_time" }),
    ));
    assert_eq!(sessions(&week), vec![1, 3, 4, 6]);
    server.ok(server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 4, "status": "done", "rpe": 3 })));
    server.ok(server.post(&t("/reports"), json!({ "week_index": 1, "day_index": 6, "status": "done", "rpe": 3 })));
    let progress = server.ok(server.get(&t("/schedule?today=6")))["progress"].clone();
    assert_eq!(progress["done_count"], 3);

    let proposal = server.ok(server.post(&t("/close-week"), json!({})));
    assert_eq!(proposal["direction"], "increase");
    assert_eq!(proposal["week_index"], 2);
    let next = server.ok(server.post(&t("/proposal-response"), json!({ "answer": "agree" })));
    assert_eq!(next["week_index"], 2);
    assert_eq!(next["goal"], proposal["proposed_goal"]);
    let again = server.post(&t("/proposal-response"), json!({ "answer": "agree" }));
    assert_eq!(again.status(), StatusCode::CONFLICT);

    let history = server.ok(server.get(&t("/history")));
    assert_eq!(history["weeks"].as_array().unwrap().len(), 1);
    assert_eq!(history["weeks"][0]["done_count"], 3);
    assert_eq!(history["weeks"][0]["revision"], "none");
    assert_eq!(history["trajectory"], json!([90.0]));
}

#[test]
fn errors_map_to_statuses() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    assert_eq!(server.get("/trainees/nobody/schedule").status(), StatusCode::NOT_FOUND);
    let id = server.create();
    let early = server.post(&format!("/trainees/{id}/close-week"), json!({}));
    assert_eq!(early.status(), StatusCode::CONFLICT);
    assert!(early.json::<Value>().unwrap()["error"].as_str().unwrap().contains("not allowed"));
    assert_eq!(server.get(&format!("/trainees/{id}/schedule")).status(), StatusCode::CONFLICT);
    server.ok(server.post(&format!("/trainees/{id}/assessment"), zero_assessment()));
    let not_offered = server.post(&format!("/trainees/{id}/goal-choice"), moderate(10, 5));
    assert_eq!(not_offered.status(), StatusCode::UNPROCESSABLE_ENTITY);
    let unnamed = server.client.post(server.url("/trainees")).send().unwrap();
    assert_eq!(unnamed.status(), StatusCode::CREATED);
}

#[test]
fn each_mutation_appends_to_the_log() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let id = server.create();
    let lines = || std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap().lines().count();
    assert_eq!(lines(), 1);
    server.ok(server.post(&format!("/trainees/{id}/assessment"), zero_assessment()));
    assert_eq!(lines(), 2);
    server.ok(server.post(&format!("/trainees/{id}/goal-choice"), moderate(10, 3)));
    assert_eq!(lines(), 5);
    let rejected = server.post(&format!("/trainees/{id}/goal-choice"), moderate(10, 3));
    assert_eq!(rejected.status(), StatusCode::CONFLICT);
    assert_eq!(lines(), 5);
    let index: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("index.json")).unwrap()).unwrap();
    assert_eq!(index[&id], "Test");
}

#[test]
fn concurrent_reports_are_serialized() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let id = server.create();
    server.ok(server.post(&format!("/trainees/{id}/assessment"), zero_assessment()));
    server.ok(server.post(&format!("/trainees/{id}/goal-choice"), moderate(10, 3)));
    let url = server.url(&format!("/trainees/{id}/reports"));
    let statuses: Vec<StatusCode> = thread::scope(|s| {
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let (client, url) = (server.client.clone(), url.clone());
                s.spawn(move || {
                    client
                        .post(url)
                        .json(&json!({ "week_index": 1, "day_index": 3, "status": "done", "rpe": 3 }))
                        .send()
                        .unwrap()
                        .status()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert_eq!(statuses.iter().filter(|s| s.is_success()).count(), 1);
    assert_eq!(statuses.iter().filter(|&&s| s == StatusCode::CONFLICT).count(), 7);
    let log = std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap();
    assert_eq!(log.lines().filter(|l| l.contains("DailyReported")).count(), 1);
}

#[test]
fn restart_restores_state() {
    let dir = tempfile::tempdir().unwrap();
    let server = Server::start(dir.path());
    let a = server.create();
    let b = server.create();
    assert_ne!(a, b);
    for id in [&a, &b] {
        server.ok(server.post(&format!("/trainees/{id}/assessment"), zero_assessment()));
        server.ok(server.post(&format!("/trainees/{id}/goal-choice"), moderate(15, 3)));
        server.ok(server.post(
            &format!("/trainees/{id}/reports"),
            json!({ "week_index": 1, "day_index": 1, "status": "nope", "reason": "too_hard" }),
        ));
    }
    server.ok(server.post(&format!("/trainees/{a}/close-week"), json!({})));
    let snapshot = |s: &Server| -> Vec<Value> {
        [&a, &b]
            .iter()
            .flat_map(|id| {
                vec![
                    s.ok(s.get(&format!("/trainees/{id}/schedule?today=2"))),
                    s.ok(s.get(&format!("/trainees/{id}/history"))),
                ]
            })
            .collect()
    };
    let before = snapshot(&server);
    server.kill();

    let server = Server::start(dir.path());
    assert_eq!(snapshot(&server), before);
    let c = server.create();
    assert!(c != a && c != b);
    server.ok(server.post(&format!("/trainees/{a}/proposal-response"), json!({ "answer": "disagree" })));
}
