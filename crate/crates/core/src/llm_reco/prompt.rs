use crate::backend::{estimate_tokens, CompletionRequest};
use crate::extract::PROFICIENCY_LEGEND;

use super::{GuidedCriteria, JobText, RecoMode};

pub(crate) const SYSTEM_PROMPT: &str =
    "You are an experienced career advisor who recommends job openings to candidates and explains why.";

/// Layout demanded from guided responses; the guided parser reads exactly these labels.
pub const DEFAULT_FORMAT_INSTRUCTION: &str = "Write one block per recommendation, best match first, in exactly this layout:
JOB_ID: <job id from the list above>
SCORE: <match score between 0 and 1>
BENEFITS:
- <benefit for the candidate>
DRAWBACKS:
- <drawback or gap>
QUALITATIVE:
- <qualitative aspect such as culture, growth or work environment>";

pub(crate) const GUIDED_REPROMPT: &str =
    "\n\nYour previous reply did not follow the required layout. Reply again using only the labeled blocks described above.";

pub(crate) const UNGUIDED_REPROMPT: &str = "\n\nYour previous reply could not be read. Start every recommendation with its job id on its own line, followed by a bulleted list of explanations.";

/// Tokens held back so that a reprompt of a planned prompt still fits the budget.
pub(crate) fn reprompt_reserve() -> usize {
    estimate_tokens(GUIDED_REPROMPT).max(estimate_tokens(UNGUIDED_REPROMPT))
}

fn job_section(jobs: &[&JobText]) -> String {
    let mut s = String::new();
    for j in jobs {
        s.push_str("### JOB ");
        s.push_str(&j.job_id);
        s.push('\n');
        s.push_str(j.text.trim());
        s.push_str("\n\n");
    }
    s
}

fn cv_section(talent_raw: &str) -> String {
    format!("CANDIDATE CV:\n{}\n\n", talent_raw.trim())
}

pub(crate) fn guided_prompt(talent_raw: &str, jobs: &[&JobText], criteria: &GuidedCriteria, top_n: usize) -> CompletionRequest {
    let ids: Vec<&str> = jobs.iter().map(|j| j.job_id.as_str()).collect();
    let user = format!(
        "MATCHING CRITERIA:\n{}\n\n{PROFICIENCY_LEGEND}\n\n{}JOB DESCRIPTIONS:\n{}\
         Recommend the {top_n} best jobs for this candidate according to the criteria. \
         Only use these job ids: {}.\n\n{}",
        criteria.criteria_text.trim(),
        cv_section(talent_raw),
        job_section(jobs),
        ids.join(", "),
        criteria.output_format_instruction.trim(),
    );
    CompletionRequest::new(SYSTEM_PROMPT, user)
}

pub(crate) fn unguided_prompt(talent_raw: &str, jobs: &[&JobText], top_n: usize) -> CompletionRequest {
    let ids: Vec<&str> = jobs.iter().map(|j| j.job_id.as_str()).collect();
    let user = format!(
        "{PROFICIENCY_LEGEND}\n\n{}JOB DESCRIPTIONS:\n{}\
         Which {top_n} of these jobs would you recommend to this candidate? Only use these job ids: {}. \
         For each recommendation, best first, write a paragraph that starts with the job id on its own line, \
         followed by a bulleted list explaining the benefits, the drawbacks and anything else the candidate \
         should consider.",
        cv_section(talent_raw),
        job_section(jobs),
        ids.join(", "),
    );
    CompletionRequest::new(SYSTEM_PROMPT, user)
}

pub(crate) fn render(talent_raw: &str, jobs: &[&JobText], mode: &RecoMode, top_n: usize) -> CompletionRequest {
    match mode {
        RecoMode::Guided(c) => guided_prompt(talent_raw, jobs, c, top_n),
        RecoMode::Unguided => unguided_prompt(talent_raw, jobs, top_n),
    }
}

/// Estimated cost of a prompt, including room for one reprompt.
pub(crate) fn prompt_cost(req: &CompletionRequest) -> usize {
    req.estimated_input_tokens() + reprompt_reserve()
}
