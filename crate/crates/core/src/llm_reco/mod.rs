//! Language-model recommendation, guided and unguided.
//!
//! Both flows hand the raw CV and job texts to the backend. Guided runs add
//! matching criteria and demand a labeled block layout; unguided runs only
//! ask for picks with explanations and parse the free-form paragraphs that
//! come back. Catalogs too large for one prompt go through [`chunked_recommend`].

mod chunk;
mod parse;
mod prompt;

use serde::{Deserialize, Serialize};

use crate::backend::{effective_budget, Backend, CompletionRequest, DEFAULT_TOKEN_LIMIT};
use crate::domain::{Attribute, Direction, JobRequirement, MatchConfig, Recommendation};
use crate::error::{Error, Result};

pub use chunk::{chunked_recommend, plan_chunks, ChunkParams, ChunkPlan};
pub use parse::{parse_guided, parse_unguided, Parsed};
pub use prompt::DEFAULT_FORMAT_INSTRUCTION;

/// A job description as handed to the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobText {
    pub job_id: String,
    pub text: String,
}

impl JobText {
    pub fn new(job_id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            job_id: job_id.into(),
            text: text.into(),
        }
    }

    /// Uses the job's raw text, or a rendering of its attributes when no text was kept.
    pub fn from_job(job: &JobRequirement) -> Self {
        let text = if job.raw_text.trim().is_empty() {
            describe_job(job)
        } else {
            job.raw_text.clone()
        };
        Self::new(job.job_id.clone(), text)
    }
}

fn describe_job(job: &JobRequirement) -> String {
    let skills: Vec<String> = job
        .required_skills
        .iter()
        .map(|s| format!("{} (proficiency {})", s.skill_name, s.proficiency))
        .collect();
    let certs: Vec<&str> = job.required_certifications.iter().map(String::as_str).collect();
    let mut s = format!(
        "{} is hiring a {}. Required skills: {}. Required certifications: {}. \
         Education level {} or equivalent. {} years of experience as {}. Time zone UTC{:+}.",
        job.organization,
        job.required_role,
        if skills.is_empty() { "none listed".into() } else { skills.join(", ") },
        if certs.is_empty() { "none".into() } else { certs.join(", ") },
        job.required_education_level,
        job.required_experience_years,
        job.required_role,
        job.timezone_offset_hours,
    );
    if let Some(loc) = &job.location {
        s.push_str(&format!(" Location: {loc}."));
    }
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GuidedCriteria {
    pub criteria_text: String,
    pub top_n: usize,
    pub output_format_instruction: String,
}

impl GuidedCriteria {
    pub fn new(criteria_text: impl Into<String>, top_n: usize) -> Self {
        Self {
            criteria_text: criteria_text.into(),
            top_n,
            output_format_instruction: DEFAULT_FORMAT_INSTRUCTION.to_string(),
        }
    }

    /// Spells out a match configuration as prose criteria.
    pub fn from_config(config: &MatchConfig) -> Self {
        let mut lines = vec!["Match the candidate to the jobs on these attributes:".to_string()];
        for attr in Attribute::ALL {
            let w = config.weight(attr);
            if w <= 0.0 {
                continue;
            }
            let what = match attr {
                Attribute::Skills => "skills and their proficiency levels",
                Attribute::Timezone => "time zone of the candidate versus the job",
                Attribute::Certifications => "required certifications",
                Attribute::Education => "education level",
                Attribute::Experience => "years of experience in the required role",
                Attribute::Role => "how highly the candidate prefers the job's role",
            };
            let how = match config.direction(attr) {
                Direction::Closer => "closer to the requirement is better, in either direction",
                Direction::Exact => "must match exactly",
                Direction::Higher => "higher than required is better",
                Direction::Lower => "lower than required is better",
            };
            lines.push(format!("- {what}: {how} (weight {w})"));
        }
        Self::new(lines.join("\n"), config.top_n)
    }

    pub fn validate(&self) -> Result<()> {
        if self.criteria_text.trim().is_empty() {
            return Err(Error::Invalid("guided criteria text is empty".into()));
        }
        if self.top_n == 0 {
            return Err(Error::Invalid("top_n must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecoMode {
    Guided(GuidedCriteria),
    Unguided,
}

/// Recommendations plus non-fatal warnings collected on the way.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RecoOutcome {
    pub recommendations: Vec<Recommendation>,
    pub warnings: Vec<String>,
}

pub fn recommend_guided(
    talent_raw: &str,
    jds_raw: &[JobText],
    criteria: &GuidedCriteria,
    backend: &dyn Backend,
) -> Result<RecoOutcome> {
    criteria.validate()?;
    let mode = RecoMode::Guided(criteria.clone());
    recommend_single(talent_raw, jds_raw, &mode, criteria.top_n, DEFAULT_TOKEN_LIMIT, backend)
}

pub fn recommend_unguided(
    talent_raw: &str,
    jds_raw: &[JobText],
    top_n: usize,
    backend: &dyn Backend,
) -> Result<RecoOutcome> {
    recommend_single(talent_raw, jds_raw, &RecoMode::Unguided, top_n, DEFAULT_TOKEN_LIMIT, backend)
}

fn check_inputs(talent_raw: &str, jds: &[JobText], top_n: usize) -> Result<()> {
    if talent_raw.trim().is_empty() {
        return Err(Error::Invalid("CV text is empty".into()));
    }
    if jds.is_empty() {
        return Err(Error::Invalid("job catalog is empty".into()));
    }
    if top_n == 0 {
        return Err(Error::Invalid("top_n must be at least 1".into()));
    }
    let mut ids = std::collections::HashSet::new();
    for j in jds {
        if j.job_id.trim().is_empty() {
            return Err(Error::Invalid("job id is empty".into()));
        }
        if !ids.insert(j.job_id.as_str()) {
            return Err(Error::Invalid(format!("duplicate job id `{}`", j.job_id)));
        }
    }
    Ok(())
}

type ParseFn = fn(&str, &[String], usize) -> Result<Parsed>;

/// One prompt over the whole of `jds`, with one reprompt on a malformed reply.
pub(crate) fn recommend_single(
    talent_raw: &str,
    jds: &[JobText],
    mode: &RecoMode,
    top_n: usize,
    token_limit: usize,
    backend: &dyn Backend,
) -> Result<RecoOutcome> {
    check_inputs(talent_raw, jds, top_n)?;
    let refs: Vec<&JobText> = jds.iter().collect();
    let request = prompt::render(talent_raw, &refs, mode, top_n);
    let cost = prompt::prompt_cost(&request);
    let budget = effective_budget(token_limit);
    if cost > budget {
        return Err(Error::Invalid(format!(
            "prompt needs about {cost} tokens but the budget is {budget}; use chunked recommendation"
        )));
    }
    let catalog: Vec<String> = jds.iter().map(|j| j.job_id.clone()).collect();
    let (reprompt, parse): (&str, ParseFn) = match mode {
        RecoMode::Guided(_) => (prompt::GUIDED_REPROMPT, parse_guided),
        RecoMode::Unguided => (prompt::UNGUIDED_REPROMPT, parse_unguided),
    };
    let parsed = complete_and_parse(backend, request, reprompt, |t| parse(t, &catalog, top_n))?;
    Ok(RecoOutcome {
        recommendations: parsed.recommendations,
        warnings: parsed.warnings,
    })
}

fn complete_and_parse(
    backend: &dyn Backend,
    request: CompletionRequest,
    reprompt: &str,
    parse: impl Fn(&str) -> Result<Parsed>,
) -> Result<Parsed> {
    let first = backend.complete(&request)?;
    match parse(&first.text) {
        Err(Error::Parse { reason, .. }) => {
            log::debug!("reply unusable ({reason}), reprompting");
            let mut retry = request;
            retry.user_prompt.push_str(reprompt);
            let second = backend.complete(&retry)?;
            parse(&second.text)
        }
        other => other,
    }
}
