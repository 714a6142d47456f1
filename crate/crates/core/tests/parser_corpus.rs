//! Canned model replies in the shapes seen in practice.

use jobreco::llm_reco::{parse_guided, parse_unguided, Parsed};
use jobreco::Error;
use proptest::prelude::*;
use serde::Deserialize;

#[derive(Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Guided,
    Unguided,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Case {
    name: String,
    mode: Mode,
    top_n: usize,
    text: String,
    /// Expected job ids, in order.
    ids: Vec<String>,
}

fn catalog() -> Vec<String> {
    (1..=10).map(|i| format!("JD{i}")).collect()
}

fn parse(mode: Mode, text: &str, top_n: usize) -> jobreco::Result<Parsed> {
    match mode {
        Mode::Guided => parse_guided(text, &catalog(), top_n),
        Mode::Unguided => parse_unguided(text, &catalog(), top_n),
    }
}

/// The corpus is shared with the acceptance suite.
fn corpus() -> Vec<Case> {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/parser_corpus.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn corpus_has_at_least_twenty_variants() {
    let corpus = corpus();
    assert!(corpus.len() >= 20);
    assert!(corpus.iter().filter(|c| c.mode == Mode::Guided).count() >= 10);
    assert!(corpus.iter().filter(|c| c.mode == Mode::Unguided).count() >= 10);
}

#[test]
fn corpus_parses_to_expected_ids() {
    let catalog = catalog();
    for case in corpus() {
        let parsed = parse(case.mode, &case.text, case.top_n).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        let ids: Vec<&str> = parsed.recommendations.iter().map(|r| r.job_id.as_str()).collect();
        assert_eq!(ids, case.ids, "{}", case.name);
        assert!(ids.iter().all(|id| catalog.iter().any(|c| c == id)), "{}: fabricated id", case.name);
        for (i, r) in parsed.recommendations.iter().enumerate() {
            assert_eq!(r.rank, i + 1, "{}", case.name);
        }
        if ids.len() < case.top_n {
            assert!(parsed.warnings.iter().any(|w| w.contains("partial")), "{}", case.name);
        }
    }
}

#[test]
fn corpus_explanations_are_kept() {
    let p = parse(Mode::Guided, &corpus()[0].text, 1).unwrap();
    let r = &p.recommendations[0];
    assert_eq!(r.benefits, ["exact stack"]);
    assert!(r.drawbacks.is_empty());
    assert_eq!(r.qualitative_notes, ["good culture"]);
    assert_eq!(r.score, Some(0.9));

    let p = parse(Mode::Unguided, "JD4\nBenefits:\n- training budget\nDrawbacks:\n- PMP required\nOther considerations:\n- large company", 1)
        .unwrap();
    let r = &p.recommendations[0];
    assert_eq!(r.benefits, ["training budget"]);
    assert_eq!(r.drawbacks, ["PMP required"]);
    assert_eq!(r.qualitative_notes, ["large company"]);
}

const GUIDED_TEMPLATES: [&str; 4] = [
    "JOB_ID: {id}\nBENEFITS:\n- nice",
    "JOB_ID: JD1\nBENEFITS:\n- a\n\nJOB_ID: {id}\nBENEFITS:\n- b",
    "**JOB_ID:** {id}\n**BENEFITS:**\n- x",
    "Here you go.\nJOB_ID: {id}\nSCORE: 0.7",
];

const UNGUIDED_TEMPLATES: [&str; 4] = [
    "{id}\n- looks good",
    "JD1\n- fine\n\n{id}\n- also fine",
    "### {id} - Some company\n- benefit: pay",
    "1. {id}\n   - strong team",
];

proptest! {
    #[test]
    fn unknown_ids_always_error(n in 11u32..100_000, prefix in prop::sample::select(vec!["JD", "jd", "JOB", "X"]), t in 0usize..4) {
        let id = format!("{prefix}{n}");
        let guided = parse(Mode::Guided, &GUIDED_TEMPLATES[t].replace("{id}", &id), 3);
        prop_assert!(matches!(guided, Err(Error::UnknownJobId(_))), "guided {id}: {guided:?}");
        let unguided = parse(Mode::Unguided, &UNGUIDED_TEMPLATES[t].replace("{id}", &id), 3);
        prop_assert!(matches!(unguided, Err(Error::UnknownJobId(_))), "unguided {id}: {unguided:?}");
    }

    #[test]
    fn parsers_never_fabricate(text in "[A-Za-z0-9 :\\-*#\n.]{0,300}") {
        let catalog = catalog();
        for mode in [Mode::Guided, Mode::Unguided] {
            if let Ok(p) = parse(mode, &text, 3) {
                for r in &p.recommendations {
                    prop_assert!(catalog.contains(&r.job_id));
                }
            }
        }
    }
}
