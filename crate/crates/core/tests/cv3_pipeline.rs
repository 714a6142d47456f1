mod common;

use common::{cv3, cv3_jobs, cv3_refs, cv3_text, unguided_reply};
use jobreco::backend::ScriptedBackend;
use jobreco::domain::{validate_recommendations, MatchConfig, SourceMethod};
use jobreco::eval::{evaluate_ranked, evaluate_scored, measure_run, RecommendationSet, RunInputs};
use jobreco::hybrid::{recommend_hybrid, HybridParams};
use jobreco::llm_reco::{recommend_guided, recommend_unguided, GuidedCriteria, JobText};
use jobreco::scoring::{rank_jobs, recommend_deterministic};

/// Scores worked out independently, attribute by attribute, for the fixture.
const EXPECTED: [(&str, f64); 10] = [
    ("JD7", 1.0),
    ("JD9", 4.9 / 6.0),
    ("JD6", 4.6 / 6.0),
    ("JD4", 0.679_487),
    ("JD10", 3.5 / 6.0),
    ("JD3", 3.1 / 6.0),
    ("JD8", 0.483_974),
    ("JD2", 0.413_462),
    ("JD1", 0.339_744),
    ("JD5", 0.266_026),
];

fn texts() -> Vec<JobText> {
    cv3_jobs().iter().map(JobText::from_job).collect()
}

fn inputs<'a>(
    talent: &'a jobreco::domain::TalentProfile,
    raw: &'a str,
    jobs: &'a [jobreco::domain::JobRequirement],
    config: &'a MatchConfig,
) -> RunInputs<'a> {
    RunInputs {
        talent: Some(talent),
        talent_raw: raw,
        jobs,
        config,
        criteria: None,
        shortlist_k: 5,
        token_budget: 8192,
        parallelism: 4,
    }
}

#[test]
fn deterministic_ranking_matches_hand_scores() {
    let jobs = cv3_jobs();
    let ranked = rank_jobs(&cv3(), &jobs, &MatchConfig::default()).unwrap();
    for ((job, b), (id, score)) in ranked.iter().zip(EXPECTED) {
        assert_eq!(job.job_id, id);
        assert!((b.total - score).abs() < 1e-6, "{id}: {} vs {score}", b.total);
    }
}

#[test]
fn deterministic_top_three() {
    let recs = recommend_deterministic(&cv3(), &cv3_jobs(), &MatchConfig::default()).unwrap();
    let ids: Vec<&str> = recs.iter().map(|r| r.job_id.as_str()).collect();
    assert_eq!(ids, ["JD7", "JD9", "JD6"]);
    assert!(validate_recommendations(&recs).is_empty());
}

#[test]
fn guided_run_can_recommend_jd3() {
    let reply = "JOB_ID: JD7\nSCORE: 0.95\nBENEFITS:\n- exact stack\nDRAWBACKS:\n- none\nQUALITATIVE:\n- strong brand\n\n\
                 JOB_ID: JD3\nSCORE: 0.6\nBENEFITS:\n- preferred role and same time zone\nDRAWBACKS:\n- Java stack\n\n\
                 JOB_ID: JD9\nSCORE: 0.8\nBENEFITS:\n- same stack\nDRAWBACKS:\n- extra certification";
    let b = ScriptedBackend::from_pairs([("MATCHING CRITERIA", reply)]).unwrap();
    let criteria = GuidedCriteria::from_config(&MatchConfig::default());
    let out = recommend_guided(&cv3_text(), &texts(), &criteria, &b).unwrap();
    let ids: Vec<&str> = out.recommendations.iter().map(|r| r.job_id.as_str()).collect();
    assert_eq!(ids, ["JD7", "JD3", "JD9"]);
    assert_eq!(out.recommendations[1].score, Some(0.6));
    assert!(validate_recommendations(&out.recommendations).is_empty());
}

#[test]
fn unguided_run_keeps_reply_order() {
    let b = ScriptedBackend::from_pairs([("", unguided_reply(&["JD4", "JD6", "JD7"]))]).unwrap();
    let out = recommend_unguided(&cv3_text(), &texts(), 3, &b).unwrap();
    let ids: Vec<&str> = out.recommendations.iter().map(|r| r.job_id.as_str()).collect();
    assert_eq!(ids, ["JD4", "JD6", "JD7"]);
    assert!(out.recommendations.iter().all(|r| r.score.is_none()));
    assert_eq!(out.recommendations[0].benefits.len(), 1);
    assert_eq!(out.recommendations[0].drawbacks.len(), 1);
}

fn hybrid_backend() -> ScriptedBackend {
    let rerank = unguided_reply(&["JD7", "JD4", "JD6"]);
    ScriptedBackend::from_pairs([
        ("Which 3 of these", rerank.as_str()),
        ("Organization: Google", "Google is rated 9 and its Full Stack Developer position is rated 9 as well."),
        ("Organization: SAP", "SAP 8.7 / role 8.6"),
        ("Organization: TCS", "ORGANIZATION_RATING: 8\nROLE_RATING: 7.5\nRATIONALE: stable employer"),
    ])
    .unwrap()
}

#[test]
fn hybrid_five_to_three() {
    let b = hybrid_backend();
    let out = recommend_hybrid(&cv3(), &cv3_text(), &cv3_jobs(), &MatchConfig::default(), &HybridParams::new(5, 3), &b)
        .unwrap();
    let shortlist: Vec<&str> = out.stages.shortlist.iter().map(|s| s.job_id.as_str()).collect();
    assert_eq!(shortlist, ["JD7", "JD9", "JD6", "JD4", "JD10"]);
    let finals: Vec<&str> = out.recommendations.iter().map(|r| r.job_id.as_str()).collect();
    assert_eq!(finals, ["JD7", "JD4", "JD6"]);
    assert!(finals.iter().all(|f| shortlist.contains(f)));
    let ratings: Vec<(f64, f64)> = out
        .recommendations
        .iter()
        .map(|r| (r.org_rating.unwrap(), r.role_rating.unwrap()))
        .collect();
    assert_eq!(ratings, [(9.0, 9.0), (8.7, 8.6), (8.0, 7.5)]);
    assert!(validate_recommendations(&out.recommendations).is_empty());
    // the rerank prompt shows only shortlisted jobs
    let rerank = &b.requests()[0].user_prompt;
    assert!(rerank.contains("### JOB JD10") && !rerank.contains("### JOB JD3\n"));
}

#[test]
fn hybrid_with_equal_sizes_only_reorders() {
    let rerank = unguided_reply(&["JD6", "JD9", "JD7"]);
    let b = ScriptedBackend::from_pairs([
        ("Which 3 of these", rerank.as_str()),
        ("Organization", "ORGANIZATION_RATING: 8\nROLE_RATING: 8"),
    ])
    .unwrap();
    let out = recommend_hybrid(&cv3(), &cv3_text(), &cv3_jobs(), &MatchConfig::default(), &HybridParams::new(3, 3), &b)
        .unwrap();
    let mut short: Vec<String> = out.stages.shortlist.iter().map(|s| s.job_id.clone()).collect();
    let mut fin: Vec<String> = out.recommendations.iter().map(|r| r.job_id.clone()).collect();
    short.sort();
    fin.sort();
    assert_eq!(short, fin);
}

#[test]
fn hybrid_over_the_whole_catalog_matches_unguided_plus_ratings() {
    let rerank = unguided_reply(&["JD4", "JD6", "JD7"]);
    let b = ScriptedBackend::from_pairs([
        ("Which 3 of these", rerank.as_str()),
        ("Organization", "ORGANIZATION_RATING: 8\nROLE_RATING: 8"),
    ])
    .unwrap();
    let out = recommend_hybrid(&cv3(), &cv3_text(), &cv3_jobs(), &MatchConfig::default(), &HybridParams::new(10, 3), &b)
        .unwrap();
    let direct = recommend_unguided(&cv3_text(), &texts(), 3, &b).unwrap();
    let a: Vec<&str> = out.recommendations.iter().map(|r| r.job_id.as_str()).collect();
    let d: Vec<&str> = direct.recommendations.iter().map(|r| r.job_id.as_str()).collect();
    assert_eq!(a, d);
    assert!(out.recommendations.iter().all(|r| r.org_rating.is_some()));
}

#[test]
fn measuring_deterministic_costs_no_tokens() {
    let (t, raw, jobs, cfg) = (cv3(), cv3_text(), cv3_jobs(), MatchConfig::default());
    let b = ScriptedBackend::from_pairs([("", "unused")]).unwrap();
    let m = measure_run(SourceMethod::Deterministic, &inputs(&t, &raw, &jobs, &cfg), &b);
    assert!(m.outcome.is_ok());
    assert_eq!(m.measurement.usage.total(), 0);
    assert_eq!(m.measurement.stages.len(), 1);
    assert_eq!(b.call_count(), 0);
}

#[test]
fn measuring_hybrid_splits_two_stages() {
    let (t, raw, jobs, cfg) = (cv3(), cv3_text(), cv3_jobs(), MatchConfig::default());
    let b = hybrid_backend();
    let m = measure_run(SourceMethod::Hybrid, &inputs(&t, &raw, &jobs, &cfg), &b);
    let out = m.outcome.unwrap();
    assert_eq!(out.recommendations.len(), 3);
    let stages: Vec<&str> = m.measurement.stages.iter().map(|s| s.stage.as_str()).collect();
    assert_eq!(stages, ["shortlist", "rerank"]);
    assert_eq!(m.measurement.stages[0].usage.total(), 0);

    // rerank tokens are the unguided call plus the three rating calls
    let expected: u64 = b
        .requests()
        .iter()
        .map(|r| {
            let input = jobreco::backend::estimate_tokens(&r.system_prompt) + jobreco::backend::estimate_tokens(&r.user_prompt);
            input as u64
        })
        .sum();
    let rerank = m.measurement.stages[1].usage;
    assert_eq!(rerank.calls, 4);
    assert_eq!(rerank.input_tokens, expected);
    assert_eq!(m.measurement.usage, rerank);

    let again = measure_run(SourceMethod::Hybrid, &inputs(&t, &raw, &jobs, &cfg), &hybrid_backend());
    assert_eq!(again.measurement.usage, m.measurement.usage);
}

#[test]
fn measuring_a_failed_run_still_reports() {
    let (t, raw, jobs, cfg) = (cv3(), cv3_text(), cv3_jobs(), MatchConfig::default());
    let b = ScriptedBackend::from_pairs([("never matches", "x")]).unwrap();
    let m = measure_run(SourceMethod::Unguided, &inputs(&t, &raw, &jobs, &cfg), &b);
    assert!(m.outcome.unwrap_err().is_backend());
    assert_eq!(m.measurement.stages.len(), 1);
    assert_eq!(m.measurement.usage.calls, 0);
}

#[test]
fn evaluation_against_fixture_references() {
    let recs = recommend_deterministic(&cv3(), &cv3_jobs(), &MatchConfig::default()).unwrap();
    let set = RecommendationSet {
        talent_id: "CV3".into(),
        method: SourceMethod::Deterministic,
        recommendations: recs,
    };
    let scored = evaluate_scored(std::slice::from_ref(&set), &cv3_refs()).unwrap();
    // |1-0.95| + |0.8167-0.8| + |0.7667-0.75| = 0.05 + 0.01667 + 0.01667
    assert!((scored.mean_abs_deviation - (0.05 + 2.0 * 0.1 / 6.0) / 3.0).abs() < 1e-9, "{}", scored.mean_abs_deviation);
    let ranked = evaluate_ranked(&[set], &cv3_refs()).unwrap();
    assert_eq!(ranked.accuracy_pct, 100.0);
}
