//! Content-based deterministic scoring.
//!
//! Each of the six attributes yields a score in `[0, 1]`; a job's total is the
//! weighted mean over the attributes that are defined for it. Recommendations
//! are the jobs sorted by total, ties broken by ascending job id.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::domain::{
    canonicalize, validate_catalog, validate_profile, violations_to_error, Attribute, Direction,
    JobRequirement, MatchConfig, Recommendation, SkillLevel, SourceMethod, TalentProfile,
};
use crate::error::{Error, Result};

/// Width of the UTC offset range, -12 to +14.
pub const TIMEZONE_SPAN_HOURS: f64 = 26.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreBreakdown {
    /// Scores of the attributes that are defined for this pair.
    pub per_attribute: BTreeMap<Attribute, f64>,
    pub total: f64,
}

/// 1 at zero deviation, `1/d` beyond, capped at 1.
pub fn reciprocal_score(deviation: f64) -> f64 {
    if deviation == 0.0 {
        1.0
    } else {
        (1.0 / deviation).min(1.0)
    }
}

fn ordinal_score(talent: f64, required: f64, direction: Direction) -> f64 {
    let d = (talent - required).abs();
    match direction {
        Direction::Closer => reciprocal_score(d),
        Direction::Exact => {
            if d == 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Direction::Higher if talent >= required => 1.0,
        Direction::Lower if talent <= required => 1.0,
        Direction::Higher | Direction::Lower => reciprocal_score(d),
    }
}

/// Mean per-skill score over the required skills; `None` when nothing is required.
///
/// A required skill the talent lacks contributes 0 and stays in the denominator.
pub fn score_skills(talent_skills: &[SkillLevel], required_skills: &[SkillLevel]) -> Option<f64> {
    score_skills_directed(talent_skills, required_skills, Direction::Closer)
}

pub fn score_skills_directed(
    talent_skills: &[SkillLevel],
    required_skills: &[SkillLevel],
    direction: Direction,
) -> Option<f64> {
    if required_skills.is_empty() {
        return None;
    }
    let held: BTreeMap<String, u8> = talent_skills
        .iter()
        .map(|s| (canonicalize(&s.skill_name), s.proficiency))
        .collect();
    let sum: f64 = required_skills
        .iter()
        .map(|req| match held.get(&canonicalize(&req.skill_name)) {
            Some(p) => ordinal_score(f64::from(*p), f64::from(req.proficiency), direction),
            None => 0.0,
        })
        .sum();
    Some(sum / required_skills.len() as f64)
}

/// `1 - |Δ| / 26`, with Δ the offset difference in hours.
pub fn score_timezone(talent_tz: f64, job_tz: f64) -> f64 {
    score_timezone_directed(talent_tz, job_tz, Direction::Closer)
}

pub fn score_timezone_directed(talent_tz: f64, job_tz: f64, direction: Direction) -> f64 {
    let d = (talent_tz - job_tz).abs();
    let linear = (1.0 - d / TIMEZONE_SPAN_HOURS).clamp(0.0, 1.0);
    match direction {
        Direction::Closer => linear,
        Direction::Exact => {
            if d == 0.0 {
                1.0
            } else {
                0.0
            }
        }
        Direction::Higher if talent_tz >= job_tz => 1.0,
        Direction::Lower if talent_tz <= job_tz => 1.0,
        Direction::Higher | Direction::Lower => linear,
    }
}

/// 1 when every required certification is held, else 0.
pub fn score_certifications(talent_certs: &BTreeSet<String>, required_certs: &BTreeSet<String>) -> f64 {
    score_certifications_directed(talent_certs, required_certs, Direction::Exact)
}

/// Non-exact directions give partial credit: the fraction of required certifications held.
pub fn score_certifications_directed(
    talent_certs: &BTreeSet<String>,
    required_certs: &BTreeSet<String>,
    direction: Direction,
) -> f64 {
    if required_certs.is_empty() {
        return 1.0;
    }
    let held: BTreeSet<String> = talent_certs.iter().map(|c| canonicalize(c)).collect();
    let matched = required_certs
        .iter()
        .filter(|c| held.contains(&canonicalize(c)))
        .count();
    match direction {
        Direction::Exact => {
            if matched == required_certs.len() {
                1.0
            } else {
                0.0
            }
        }
        _ => matched as f64 / required_certs.len() as f64,
    }
}

pub fn score_education(talent_level: u8, required_level: u8) -> f64 {
    score_education_directed(talent_level, required_level, Direction::Closer)
}

pub fn score_education_directed(talent_level: u8, required_level: u8, direction: Direction) -> f64 {
    ordinal_score(f64::from(talent_level), f64::from(required_level), direction)
}

/// Ratio of held to required years in the required role.
///
/// `Higher` caps the ratio at 1; `Closer` uses `min(r, 1/r)` so over-qualification
/// is penalised as much as under-qualification.
pub fn score_experience(talent_years: f64, required_years: f64, direction: Direction) -> f64 {
    if required_years == 0.0 {
        return 1.0;
    }
    let r = talent_years / required_years;
    match direction {
        Direction::Higher => r.min(1.0),
        Direction::Closer => {
            if r > 0.0 {
                r.min(1.0 / r)
            } else {
                0.0
            }
        }
        Direction::Lower => {
            if r <= 1.0 {
                1.0
            } else {
                1.0 / r
            }
        }
        Direction::Exact => {
            if r == 1.0 {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// `1/k` when the required role is the talent's k-th preference, 0 when not preferred.
pub fn score_role(role_preferences: &[String], required_role: &str) -> f64 {
    score_role_directed(role_preferences, required_role, Direction::Closer)
}

/// With `Exact`, any listed preference scores 1.
pub fn score_role_directed(role_preferences: &[String], required_role: &str, direction: Direction) -> f64 {
    let required = canonicalize(required_role);
    match role_preferences.iter().position(|r| canonicalize(r) == required) {
        None => 0.0,
        Some(_) if direction == Direction::Exact => 1.0,
        Some(i) => 1.0 / (i + 1) as f64,
    }
}

/// Weighted mean of the given attribute scores. `None` if the weights of all
/// present attributes sum to zero.
pub fn weighted_mean(scores: &BTreeMap<Attribute, f64>, config: &MatchConfig) -> Option<f64> {
    let (num, den) = scores.iter().fold((0.0, 0.0), |(n, d), (attr, s)| {
        let w = config.weight(*attr);
        (n + w * s, d + w)
    });
    (den > 0.0).then(|| num / den)
}

pub fn score_job(talent: &TalentProfile, job: &JobRequirement, config: &MatchConfig) -> Result<ScoreBreakdown> {
    let mut per_attribute = BTreeMap::new();
    if let Some(s) = score_skills_directed(
        &talent.skills,
        &job.required_skills,
        config.direction(Attribute::Skills),
    ) {
        per_attribute.insert(Attribute::Skills, s);
    }
    per_attribute.insert(
        Attribute::Timezone,
        score_timezone_directed(
            talent.timezone_offset_hours,
            job.timezone_offset_hours,
            config.direction(Attribute::Timezone),
        ),
    );
    per_attribute.insert(
        Attribute::Certifications,
        score_certifications_directed(
            &talent.certifications,
            &job.required_certifications,
            config.direction(Attribute::Certifications),
        ),
    );
    per_attribute.insert(
        Attribute::Education,
        score_education_directed(
            talent.education_level,
            job.required_education_level,
            config.direction(Attribute::Education),
        ),
    );
    per_attribute.insert(
        Attribute::Experience,
        score_experience(
            talent.years_in_role(&job.required_role),
            job.required_experience_years,
            config.direction(Attribute::Experience),
        ),
    );
    per_attribute.insert(
        Attribute::Role,
        score_role_directed(
            &talent.role_preferences,
            &job.required_role,
            config.direction(Attribute::Role),
        ),
    );
    let total = weighted_mean(&per_attribute, config).ok_or_else(|| {
        Error::Scoring(format!(
            "no weighted attribute is defined for talent `{}` and job `{}`",
            talent.talent_id, job.job_id
        ))
    })?;
    Ok(ScoreBreakdown { per_attribute, total })
}

/// Scores every job and returns the best `config.top_n`, rank 1 first.
pub fn recommend_deterministic(
    talent: &TalentProfile,
    jobs: &[JobRequirement],
    config: &MatchConfig,
) -> Result<Vec<Recommendation>> {
    Ok(rank_jobs(talent, jobs, config)?
        .into_iter()
        .take(config.top_n)
        .enumerate()
        .map(|(i, (job, breakdown))| {
            let mut rec = Recommendation::new(job.job_id.clone(), i + 1, SourceMethod::Deterministic);
            rec.score = Some(breakdown.total);
            rec.qualitative_notes = breakdown
                .per_attribute
                .iter()
                .map(|(a, s)| format!("{a}: {s:.2}"))
                .collect();
            rec
        })
        .collect())
}

/// Every job with its breakdown, best first.
pub fn rank_jobs<'a>(
    talent: &TalentProfile,
    jobs: &'a [JobRequirement],
    config: &MatchConfig,
) -> Result<Vec<(&'a JobRequirement, ScoreBreakdown)>> {
    if jobs.is_empty() {
        return Err(Error::Invalid("job catalog is empty".into()));
    }
    let v = validate_profile(talent);
    if !v.is_empty() {
        return Err(violations_to_error("talent profile", &v));
    }
    let v = validate_catalog(jobs);
    if !v.is_empty() {
        return Err(violations_to_error("job catalog", &v));
    }
    let v = config.validate();
    if !v.is_empty() {
        return Err(violations_to_error("match config", &v));
    }
    let mut scored = jobs
        .iter()
        .map(|j| score_job(talent, j, config).map(|b| (j, b)))
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(|(ja, a), (jb, b)| {
        b.total
            .total_cmp(&a.total)
            .then_with(|| ja.job_id.cmp(&jb.job_id))
    });
    Ok(scored)
}

/// Two-decimal display form of a score.
pub fn display_score(score: f64) -> String {
    format!("{score:.2}")
}
