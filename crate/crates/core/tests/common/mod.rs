#![allow(dead_code)]

use std::path::PathBuf;

use jobreco::domain::{read_json, JobRequirement, TalentProfile};
use jobreco::eval::ReferenceScores;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cv3").join(name)
}

pub fn cv3() -> TalentProfile {
    read_json(&fixture("talent.json")).unwrap()
}

pub fn cv3_text() -> String {
    std::fs::read_to_string(fixture("cv3.txt")).unwrap()
}

pub fn cv3_jobs() -> Vec<JobRequirement> {
    read_json(&fixture("jobs.json")).unwrap()
}

pub fn cv3_refs() -> ReferenceScores {
    read_json(&fixture("refs.json")).unwrap()
}

/// Unguided reply naming `ids` in order, one bullet each.
pub fn unguided_reply(ids: &[&str]) -> String {
    ids.iter()
        .map(|id| format!("{id}\n- Benefit: good fit for the candidate\n- However the commute is long"))
        .collect::<Vec<_>>()
        .join("\n\n")
}
