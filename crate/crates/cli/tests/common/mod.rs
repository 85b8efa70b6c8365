#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::path::Path;
use std::process::{Child, Command, Stdio};

use reqwest::blocking::{Client, Response};
use serde_json::Value;

pub const BIN: &str = env!("CARGO_BIN_EXE_coach");

/// A `coach serve` child process on an ephemeral port.
pub struct Server {
    child: Child,
    pub base: String,
    pub client: Client,
}

impl Server {
    pub fn start(data_dir: &Path) -> Server {
        let mut child = Command::new(BIN)
            .args(["serve", "--listen", "127.0.0.1:0", "--data-dir"])
            .arg(data_dir)
            .env_remove("COACH_DATA_DIR")
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .expect("spawn coach serve");
        let mut line = String::new();
        BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
        let addr = line.trim().strip_prefix("listening on ").unwrap_or_else(|| panic!("unexpected banner {line:?}"));
        Server { child, base: format!("http://{addr}"), client: Client::new() }
    }

    /// Terminates the process without any chance to clean up.
    pub fn kill(mut self) {
        self.child.kill().unwrap();
        self.child.wait().unwrap();
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub fn get(&self, path: &str) -> Response {
        self.client.get(self.url(path)).send().unwrap()
    }

    pub fn post(&self, path: &str, body: Value) -> Response {
        self.client.post(self.url(path)).json(&body).send().unwrap()
    }

    pub fn ok(&self, resp: Response) -> Value {
        let status = resp.status();
        let body: Value = resp.json().unwrap();
        assert!(status.is_success(), "{status}: {body}");
        body
    }

    pub fn create(&self) -> String {
        let body = self.ok(self.post("/trainees", serde_json::json!({ "name": "Test" })));
        body["trainee_id"].as_str().unwrap().to_string()
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
