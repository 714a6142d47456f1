//! Deterministic shortlist followed by an unguided language-model rerank.
//!
//! Stage 1 scores the whole catalog and keeps the best `shortlist_k` jobs.
//! Stage 2 shows only those job texts to the model, without the stage-1
//! scores, and asks for the best `final_n`. Each final pick is then rated for
//! its organization and role on a 1 to 10 scale; a failed rating leaves the
//! recommendation without ratings instead of failing the run.

use std::sync::LazyLock;

use regex::Regex;
use serde::Serialize;

use crate::backend::{Backend, CompletionRequest, DEFAULT_TOKEN_LIMIT};
use crate::domain::{natural_cmp, JobRequirement, MatchConfig, Recommendation, SourceMethod, TalentProfile};
use crate::error::{Error, Result};
use crate::llm_reco::{chunked_recommend, ChunkParams, JobText, RecoMode, RecoOutcome};
use crate::parallel::map_bounded;
use crate::scoring::recommend_deterministic;

pub const DEFAULT_SHORTLIST: usize = 5;
pub const DEFAULT_FINAL: usize = 3;
pub const MIN_RATING: f64 = 1.0;
pub const MAX_RATING: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridParams {
    pub shortlist_k: usize,
    pub final_n: usize,
    /// Context window for the rerank prompt.
    pub token_budget: usize,
    pub parallelism: usize,
}

impl Default for HybridParams {
    fn default() -> Self {
        Self {
            shortlist_k: DEFAULT_SHORTLIST,
            final_n: DEFAULT_FINAL,
            token_budget: DEFAULT_TOKEN_LIMIT,
            parallelism: 4,
        }
    }
}

impl HybridParams {
    pub fn new(shortlist_k: usize, final_n: usize) -> Self {
        Self {
            shortlist_k,
            final_n,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShortlistEntry {
    pub job_id: String,
    pub rank: usize,
    pub score: f64,
}

/// What each stage produced, kept for auditing the final result.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Stages {
    pub shortlist: Vec<ShortlistEntry>,
    /// Job ids in the order the rerank returned them.
    pub rerank: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct HybridOutcome {
    pub recommendations: Vec<Recommendation>,
    pub stages: Stages,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rating {
    pub org_rating: f64,
    pub role_rating: f64,
    pub rationale: String,
    pub warnings: Vec<String>,
}

fn check_params(jobs: &[JobRequirement], params: &HybridParams) -> Result<()> {
    if params.final_n == 0 {
        return Err(Error::Invalid("final_n must be at least 1".into()));
    }
    if params.final_n > params.shortlist_k {
        return Err(Error::Invalid(format!(
            "final_n ({}) exceeds shortlist_k ({})",
            params.final_n, params.shortlist_k
        )));
    }
    if params.shortlist_k > jobs.len() {
        return Err(Error::Invalid(format!(
            "shortlist_k ({}) exceeds the catalog size ({})",
            params.shortlist_k,
            jobs.len()
        )));
    }
    Ok(())
}

/// Stage 1: the best `shortlist_k` jobs by deterministic score.
pub fn shortlist(
    talent: &TalentProfile,
    jobs: &[JobRequirement],
    config: &MatchConfig,
    shortlist_k: usize,
) -> Result<Vec<ShortlistEntry>> {
    let config = config.clone().with_top_n(shortlist_k);
    Ok(recommend_deterministic(talent, jobs, &config)?
        .into_iter()
        .map(|r| ShortlistEntry {
            score: r.score.expect("deterministic recommendations carry a score"),
            job_id: r.job_id,
            rank: r.rank,
        })
        .collect())
}

/// Stage 2: unguided selection of `params.final_n` among the shortlisted jobs.
///
/// Jobs are presented in id order so the prompt does not leak the stage-1 ranking.
pub fn rerank(
    talent_raw: &str,
    shortlisted: &[&JobRequirement],
    params: &HybridParams,
    backend: &dyn Backend,
) -> Result<RecoOutcome> {
    let mut texts: Vec<JobText> = shortlisted.iter().map(|j| JobText::from_job(j)).collect();
    texts.sort_by(|a, b| natural_cmp(&a.job_id, &b.job_id));
    let chunk = ChunkParams {
        token_budget: params.token_budget,
        parallelism: params.parallelism,
        ..ChunkParams::new(params.final_n)
    };
    chunked_recommend(talent_raw, &texts, &RecoMode::Unguided, &chunk, backend)
}

/// Rates every recommendation's organization and role in place, concurrently.
/// Failures become warnings and leave the ratings empty.
pub fn rate_recommendations(
    recs: &mut [Recommendation],
    jobs: &[JobRequirement],
    parallelism: usize,
    backend: &dyn Backend,
) -> Vec<String> {
    let targets: Vec<&JobRequirement> = recs
        .iter()
        .map(|r| jobs.iter().find(|j| j.job_id == r.job_id).expect("recommended ids come from the catalog"))
        .collect();
    let ratings = map_bounded(&targets, parallelism, |_, job| rate_org_and_role(job, backend));
    let mut warnings = Vec::new();
    for (rec, rating) in recs.iter_mut().zip(ratings) {
        match rating {
            Ok(r) => {
                rec.org_rating = Some(r.org_rating);
                rec.role_rating = Some(r.role_rating);
                if !r.rationale.is_empty() {
                    rec.qualitative_notes.push(format!("rating rationale: {}", r.rationale));
                }
                warnings.extend(r.warnings.into_iter().map(|w| format!("{}: {w}", rec.job_id)));
            }
            Err(e) => warnings.push(format!("{}: continuing without ratings: {e}", rec.job_id)),
        }
    }
    warnings
}

pub fn recommend_hybrid(
    talent: &TalentProfile,
    talent_raw: &str,
    jobs: &[JobRequirement],
    config: &MatchConfig,
    params: &HybridParams,
    backend: &dyn Backend,
) -> Result<HybridOutcome> {
    recommend_hybrid_observed(talent, talent_raw, jobs, config, params, backend, &mut |_| {})
}

/// [`recommend_hybrid`] that calls `stage_done` with `"shortlist"` and then
/// `"rerank"` as each stage finishes; ratings count as part of the rerank.
pub fn recommend_hybrid_observed(
    talent: &TalentProfile,
    talent_raw: &str,
    jobs: &[JobRequirement],
    config: &MatchConfig,
    params: &HybridParams,
    backend: &dyn Backend,
    stage_done: &mut dyn FnMut(&'static str),
) -> Result<HybridOutcome> {
    check_params(jobs, params)?;
    let short = shortlist(talent, jobs, config, params.shortlist_k).map_err(|e| Error::stage("shortlist", e))?;
    stage_done("shortlist");
    let shortlisted: Vec<&JobRequirement> = short
        .iter()
        .map(|s| jobs.iter().find(|j| j.job_id == s.job_id).expect("shortlist ids come from the catalog"))
        .collect();
    let reranked = rerank(talent_raw, &shortlisted, params, backend).map_err(|e| Error::stage("rerank", e))?;

    let mut recs: Vec<Recommendation> = reranked
        .recommendations
        .into_iter()
        .map(|mut r| {
            r.source_method = SourceMethod::Hybrid;
            r.score = short.iter().find(|s| s.job_id == r.job_id).map(|s| s.score);
            r
        })
        .collect();
    let stages = Stages {
        shortlist: short,
        rerank: recs.iter().map(|r| r.job_id.clone()).collect(),
    };
    let mut warnings = reranked.warnings;
    warnings.extend(rate_recommendations(&mut recs, jobs, params.parallelism, backend));
    stage_done("rerank");
    Ok(HybridOutcome {
        recommendations: recs,
        stages,
        warnings,
    })
}

const RATING_REPROMPT: &str = "\n\nYour previous reply had no usable ratings. Reply again in exactly this layout:\n\
ORGANIZATION_RATING: <number from 1 to 10>\nROLE_RATING: <number from 1 to 10>\nRATIONALE: <one paragraph>";

pub fn rating_prompt(job: &JobRequirement) -> CompletionRequest {
    let mut user = format!(
        "Rate the organization {} and the {} role in that organization on a scale of 1 to 10, \
         from the point of view of a job seeker. Consider work culture, growth opportunities, \
         compensation reputation, work-life balance and the responsibilities of the role.\n\n\
         Organization: {}\nRole: {}\n",
        job.organization, job.required_role, job.organization, job.required_role
    );
    if !job.raw_text.trim().is_empty() {
        user.push_str(&format!("\nJob description:\n{}\n", job.raw_text.trim()));
    }
    user.push_str(
        "\nAnswer in this layout:\nORGANIZATION_RATING: <number from 1 to 10>\n\
         ROLE_RATING: <number from 1 to 10>\nRATIONALE: <one paragraph>",
    );
    CompletionRequest::new("You are an impartial analyst of employers and job roles.", user).with_max_output_tokens(400)
}

static ORG_LABEL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)organi[sz]ation[\s_-]*rating[*_`\s]*[:=\-–—][*_`\s]*(\d+(?:\.\d+)?)").unwrap()
});
static ROLE_LABEL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)role[\s_-]*rating[*_`\s]*[:=\-–—][*_`\s]*(\d+(?:\.\d+)?)").unwrap());
static RATIONALE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?is)rationale[*_`\s]*[:=\-–—][*_`\s]*(.*)$").unwrap());
static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\d+(?:\.\d+)?").unwrap());

/// Words that mark a number as a scale bound rather than a rating ("8 out of 10", "scale of 1 to 10").
const BOUND_WORDS: [&str; 4] = ["of", "to", "on", "from"];

/// Numbers that can plausibly be ratings, in order of appearance.
fn candidate_numbers(text: &str) -> Vec<f64> {
    let mut out = Vec::new();
    for m in NUMBER.find_iter(text) {
        let before = &text[..m.start()];
        let after = &text[m.end()..];
        let glued = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric() || c == '_');
        if glued(before.chars().next_back()) || glued(after.chars().next()) {
            continue;
        }
        if m.as_str().split('.').next().is_some_and(|int| int.len() > 2) {
            continue;
        }
        let lead = before.trim_end().to_lowercase();
        if lead.ends_with('/') || BOUND_WORDS.iter().any(|w| ends_with_word(&lead, w)) {
            continue;
        }
        if let Ok(v) = m.as_str().parse() {
            out.push(v);
        }
    }
    out
}

fn ends_with_word(s: &str, word: &str) -> bool {
    s.ends_with(word) && s[..s.len() - word.len()].chars().next_back().is_none_or(|c| !c.is_alphanumeric())
}

fn clamp_rating(v: f64, what: &str, warnings: &mut Vec<String>) -> f64 {
    let c = v.clamp(MIN_RATING, MAX_RATING);
    if c != v {
        warnings.push(format!("{what} rating {v} clamped to {c}"));
    }
    c
}

/// Reads two ratings and a rationale from a reply, labeled or not.
///
/// Labeled values win; otherwise the first two numbers that are not scale
/// bounds are taken as organization then role.
pub fn parse_rating(text: &str) -> Result<Rating> {
    let labeled = |re: &Regex| re.captures(text).and_then(|c| c[1].parse::<f64>().ok());
    let (org, role) = match (labeled(&ORG_LABEL), labeled(&ROLE_LABEL)) {
        (Some(o), Some(r)) => (o, r),
        _ => match candidate_numbers(text)[..] {
            [o, r, ..] => (o, r),
            _ => {
                return Err(Error::Rating {
                    reason: "fewer than two ratings in the reply".into(),
                    text: text.to_string(),
                })
            }
        },
    };
    let rationale = RATIONALE
        .captures(text)
        .map(|c| c[1].trim().to_string())
        .unwrap_or_else(|| text.trim().to_string());
    let mut warnings = Vec::new();
    Ok(Rating {
        org_rating: clamp_rating(org, "organization", &mut warnings),
        role_rating: clamp_rating(role, "role", &mut warnings),
        rationale,
        warnings,
    })
}

/// One rating call, with one reprompt when no ratings can be read.
pub fn rate_org_and_role(job: &JobRequirement, backend: &dyn Backend) -> Result<Rating> {
    if job.organization.trim().is_empty() {
        return Err(Error::Invalid(format!("job `{}` has no organization to rate", job.job_id)));
    }
    let request = rating_prompt(job);
    let first = backend.complete(&request)?;
    match parse_rating(&first.text) {
        Err(Error::Rating { .. }) => {
            let mut retry = request;
            retry.user_prompt.push_str(RATING_REPROMPT);
            parse_rating(&backend.complete(&retry)?.text)
        }
        other => other,
    }
}
