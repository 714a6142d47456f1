#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary with an empty environment plus `env`.
pub fn jobreco_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_jobreco"))
        .args(args)
        .env_clear()
        .envs(env.iter().copied())
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn jobreco(args: &[&str]) -> Run {
    jobreco_env(args, &[])
}

/// Path of a file in the shared CV3 fixture.
pub fn cv3(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures/cv3")
        .join(name)
        .display()
        .to_string()
}

pub fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

/// Writes a scripted-backend rules file.
pub fn rules(dir: &Path, pairs: &[(&str, &str)]) -> String {
    let v: Vec<serde_json::Value> = pairs
        .iter()
        .map(|(m, r)| serde_json::json!({"match": m, "response": r}))
        .collect();
    write(dir, "rules.json", &serde_json::to_string_pretty(&v).unwrap())
}

pub fn unguided_reply(ids: &[&str]) -> String {
    ids.iter()
        .map(|id| format!("{id}\n- Benefit: good fit for the candidate\n- However the commute is long"))
        .collect::<Vec<_>>()
        .join("\n\n")
}

/// Rules for the hybrid walkthrough: rerank keeps JD7, JD4, JD6 and every job gets rated.
pub fn hybrid_rules(dir: &Path) -> String {
    let rerank = unguided_reply(&["JD7", "JD4", "JD6"]);
    rules(
        dir,
        &[
            ("Which 3 of these", &rerank),
            ("Organization: Google", "ORGANIZATION_RATING: 9\nROLE_RATING: 9\nRATIONALE: strong brand"),
            ("Organization: SAP", "SAP 8.7 / role 8.6"),
            ("Organization: TCS", "ORGANIZATION_RATING: 8\nROLE_RATING: 7.5\nRATIONALE: stable employer"),
        ],
    )
}

pub fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}
