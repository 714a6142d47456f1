//! Free text to structured records, via the completion backend.
//!
//! The backend is asked for a JSON object with the exact field names of the
//! domain types. Its answer is located inside whatever prose surrounds it,
//! canonicalised, and out-of-range numbers are clamped with a warning. One
//! reprompt is attempted when the answer cannot be parsed.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::backend::{Backend, CompletionRequest};
use crate::domain::{
    canonicalize, JobRequirement, SkillLevel, TalentProfile, MAX_EDUCATION, MAX_PROFICIENCY, MAX_TZ_OFFSET,
    MIN_EDUCATION, MIN_TZ_OFFSET,
};
use crate::error::{Error, Result};

/// Mapping of textual skill levels onto the numeric scale, stated in every prompt that shows proficiencies.
pub const PROFICIENCY_LEGEND: &str = "Skill proficiency is an integer from 0 to 5 \
(0 = none, 5 = expert). Textual levels map as: beginner = 1, intermediate = 3, advanced = 5.";

const EDUCATION_LEGEND: &str = "Education level is an integer from 1 to 5: 1 = high school, \
2 = diploma or associate degree, 3 = bachelor's degree, 4 = master's degree, 5 = doctorate.";

const REPROMPT_SUFFIX: &str = "\n\nYour previous reply could not be parsed. Return only the JSON object.";

const EXTRACT_SYSTEM: &str =
    "You convert unstructured recruiting documents into structured JSON records. You never invent facts.";

/// A parsed record plus the adjustments made while normalising it.
#[derive(Debug, Clone, PartialEq)]
pub struct Extracted<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

pub fn talent_prompt(raw_cv: &str) -> CompletionRequest {
    let user = format!(
        "Extract the candidate profile from the CV below as one JSON object with exactly these fields:\n\
         - talent_id: string, the candidate's name or an identifier\n\
         - role_preferences: array of role names, most preferred first\n\
         - skills: array of objects {{\"skill_name\": string, \"proficiency\": integer}}\n\
         - certifications: array of strings\n\
         - education_level: integer\n\
         - experience_by_role: object mapping role name to years of experience\n\
         - timezone_offset_hours: number, UTC offset in hours between -12 and 14\n\
         - preferred_location: string or null\n\n\
         {PROFICIENCY_LEGEND}\n{EDUCATION_LEGEND}\n\n\
         Respond with the JSON object only.\n\nCV:\n{raw_cv}"
    );
    CompletionRequest::new(EXTRACT_SYSTEM, user)
}

pub fn job_prompt(raw_jd: &str) -> CompletionRequest {
    let user = format!(
        "Extract the job requirements from the job description below as one JSON object with exactly these fields:\n\
         - job_id: string identifier of the posting, if stated\n\
         - organization: name of the hiring organization\n\
         - required_role: role name\n\
         - required_skills: array of objects {{\"skill_name\": string, \"proficiency\": integer}}\n\
         - required_certifications: array of strings (empty if none are required)\n\
         - required_education_level: integer\n\
         - required_experience_years: number\n\
         - timezone_offset_hours: number, UTC offset in hours between -12 and 14\n\
         - location: string or null\n\n\
         {PROFICIENCY_LEGEND}\n{EDUCATION_LEGEND}\n\n\
         Respond with the JSON object only.\n\nJOB DESCRIPTION:\n{raw_jd}"
    );
    CompletionRequest::new(EXTRACT_SYSTEM, user)
}

pub fn cv_generation_prompt(raw_jd: &str) -> CompletionRequest {
    let user = format!(
        "Write a realistic resume, in plain text, for a fictional candidate who would be a strong fit \
         for the job description below. Include the candidate's name, preferred roles, skills with \
         proficiency levels, certifications, education, years of experience per role, time zone and \
         preferred location, plus a short narrative of achievements.\n\nJOB DESCRIPTION:\n{raw_jd}"
    );
    CompletionRequest::new(
        "You write realistic, varied resumes for test data. Output the resume text only.",
        user,
    )
}

/// Returns the first balanced `{...}` object in `text`, skipping braces inside strings.
pub fn find_json_object(text: &str) -> Option<&str> {
    let bytes = text.as_bytes();
    let mut search_from = 0;
    while let Some(off) = text[search_from..].find('{') {
        let start = search_from + off;
        let mut depth = 0usize;
        let mut in_str = false;
        let mut escaped = false;
        for (i, &b) in bytes.iter().enumerate().skip(start) {
            if in_str {
                match b {
                    _ if escaped => escaped = false,
                    b'\\' => escaped = true,
                    b'"' => in_str = false,
                    _ => {}
                }
                continue;
            }
            match b {
                b'"' => in_str = true,
                b'{' => depth += 1,
                b'}' => {
                    depth -= 1;
                    if depth == 0 {
                        let candidate = &text[start..=i];
                        if serde_json::from_str::<Value>(candidate).is_ok() {
                            return Some(candidate);
                        }
                        break;
                    }
                }
                _ => {}
            }
        }
        search_from = start + 1;
    }
    None
}

struct Normalizer {
    warnings: Vec<String>,
}

impl Normalizer {
    fn clamp(&mut self, field: &str, v: f64, lo: f64, hi: f64) -> f64 {
        let c = v.clamp(lo, hi);
        if c != v {
            self.warnings.push(format!("{field}: {v} clamped to {c}"));
        }
        c
    }

    fn clamp_int(&mut self, field: &str, v: f64, lo: u8, hi: u8) -> u8 {
        let c = self.clamp(field, v, f64::from(lo), f64::from(hi));
        let r = c.round();
        if r != c {
            self.warnings.push(format!("{field}: {c} rounded to {r}"));
        }
        r as u8
    }

    fn skills(&mut self, field: &str, v: Option<&Value>) -> std::result::Result<Vec<SkillLevel>, String> {
        let mut out: Vec<SkillLevel> = Vec::new();
        let mut push = |this: &mut Self, name: &str, level: &Value| -> std::result::Result<(), String> {
            let name = canonicalize(name);
            if name.is_empty() {
                return Ok(());
            }
            let level = proficiency_value(level)
                .ok_or_else(|| format!("{field}[{name}]: unreadable proficiency {level}"))?;
            let p = this.clamp_int(&format!("{field}[{name}].proficiency"), level, 0, MAX_PROFICIENCY);
            if out.iter().any(|s| s.skill_name == name) {
                this.warnings.push(format!("{field}: duplicate skill `{name}` dropped"));
            } else {
                out.push(SkillLevel {
                    skill_name: name,
                    proficiency: p,
                });
            }
            Ok(())
        };
        match v {
            None | Some(Value::Null) => {}
            Some(Value::Array(items)) => {
                for item in items {
                    let obj = item
                        .as_object()
                        .ok_or_else(|| format!("{field}: expected objects, found {item}"))?;
                    let name = obj
                        .get("skill_name")
                        .or_else(|| obj.get("name"))
                        .and_then(Value::as_str)
                        .ok_or_else(|| format!("{field}: entry without skill_name"))?;
                    let level = obj.get("proficiency").unwrap_or(&Value::Null);
                    push(self, name, level)?;
                }
            }
            Some(Value::Object(map)) => {
                for (name, level) in map {
                    push(self, name, level)?;
                }
            }
            Some(other) => return Err(format!("{field}: expected an array, found {other}")),
        }
        Ok(out)
    }
}

fn proficiency_value(v: &Value) -> Option<f64> {
    match v {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => {
            let c = canonicalize(s);
            match c.as_str() {
                "beginner" => Some(1.0),
                "intermediate" => Some(3.0),
                "advanced" => Some(5.0),
                _ => c.parse().ok(),
            }
        }
        _ => None,
    }
}

fn number(v: Option<&Value>) -> Option<f64> {
    match v? {
        Value::Number(n) => n.as_f64(),
        Value::String(s) => s.trim().trim_start_matches('+').parse().ok(),
        _ => None,
    }
}

fn string_list(field: &str, v: Option<&Value>) -> std::result::Result<Vec<String>, String> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::String(s)) => Ok(vec![canonicalize(s)].into_iter().filter(|s| !s.is_empty()).collect()),
        Some(Value::Array(items)) => items
            .iter()
            .map(|i| {
                i.as_str()
                    .map(canonicalize)
                    .ok_or_else(|| format!("{field}: expected strings, found {i}"))
            })
            .filter(|r| !matches!(r, Ok(s) if s.is_empty()))
            .collect(),
        Some(other) => Err(format!("{field}: expected an array of strings, found {other}")),
    }
}

fn optional_string(v: Option<&Value>) -> Option<String> {
    v.and_then(Value::as_str)
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
}

fn require<T>(field: &str, v: Option<T>) -> std::result::Result<T, String> {
    v.ok_or_else(|| format!("missing or unreadable field `{field}`"))
}

fn derived_id(prefix: &str, raw: &str) -> String {
    let digest = Sha256::digest(raw.as_bytes());
    let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    format!("{prefix}-{hex}")
}

fn parse_object(text: &str) -> std::result::Result<Map<String, Value>, String> {
    let json = find_json_object(text).ok_or("no JSON object in response")?;
    match serde_json::from_str(json) {
        Ok(Value::Object(m)) => Ok(m),
        _ => Err("response JSON is not an object".into()),
    }
}

fn talent_from_response(raw_cv: &str, text: &str) -> std::result::Result<Extracted<TalentProfile>, String> {
    let obj = parse_object(text)?;
    let mut n = Normalizer { warnings: Vec::new() };

    let mut roles = Vec::new();
    for r in string_list("role_preferences", obj.get("role_preferences"))? {
        if roles.contains(&r) {
            n.warnings.push(format!("role_preferences: duplicate role `{r}` dropped"));
        } else {
            roles.push(r);
        }
    }
    if roles.is_empty() {
        return Err("role_preferences is empty".into());
    }
    let skills = n.skills("skills", obj.get("skills"))?;
    let certifications: BTreeSet<String> = string_list("certifications", obj.get("certifications"))?
        .into_iter()
        .collect();
    let edu = require("education_level", number(obj.get("education_level")))?;
    let education_level = n.clamp_int("education_level", edu, MIN_EDUCATION, MAX_EDUCATION);

    let mut experience_by_role = BTreeMap::new();
    match obj.get("experience_by_role") {
        None | Some(Value::Null) => {}
        Some(Value::Object(m)) => {
            for (role, years) in m {
                let role = canonicalize(role);
                let y = number(Some(years)).ok_or_else(|| format!("experience_by_role[{role}]: not a number"))?;
                let y = n.clamp(&format!("experience_by_role[{role}]"), y, 0.0, f64::MAX);
                experience_by_role.insert(role, y);
            }
        }
        Some(other) => return Err(format!("experience_by_role: expected an object, found {other}")),
    }
    let tz = require("timezone_offset_hours", number(obj.get("timezone_offset_hours")))?;
    let timezone_offset_hours = n.clamp("timezone_offset_hours", tz, MIN_TZ_OFFSET, MAX_TZ_OFFSET);

    let talent_id = optional_string(obj.get("talent_id")).unwrap_or_else(|| derived_id("cv", raw_cv));
    Ok(Extracted {
        value: TalentProfile {
            talent_id,
            role_preferences: roles,
            skills,
            certifications,
            education_level,
            experience_by_role,
            timezone_offset_hours,
            preferred_location: optional_string(obj.get("preferred_location")),
            raw_text: raw_cv.to_string(),
        },
        warnings: n.warnings,
    })
}

fn job_from_response(raw_jd: &str, text: &str) -> std::result::Result<Extracted<JobRequirement>, String> {
    let obj = parse_object(text)?;
    let mut n = Normalizer { warnings: Vec::new() };

    let organization = require("organization", optional_string(obj.get("organization")))?;
    let required_role = canonicalize(&require("required_role", optional_string(obj.get("required_role")))?);
    let required_skills = n.skills("required_skills", obj.get("required_skills"))?;
    let required_certifications: BTreeSet<String> =
        string_list("required_certifications", obj.get("required_certifications"))?
            .into_iter()
            .collect();
    let edu = require("required_education_level", number(obj.get("required_education_level")))?;
    let required_education_level = n.clamp_int("required_education_level", edu, MIN_EDUCATION, MAX_EDUCATION);
    let years = require("required_experience_years", number(obj.get("required_experience_years")))?;
    let required_experience_years = n.clamp("required_experience_years", years, 0.0, f64::MAX);
    let tz = require("timezone_offset_hours", number(obj.get("timezone_offset_hours")))?;
    let timezone_offset_hours = n.clamp("timezone_offset_hours", tz, MIN_TZ_OFFSET, MAX_TZ_OFFSET);
    let job_id = optional_string(obj.get("job_id")).unwrap_or_else(|| derived_id("jd", raw_jd));

    Ok(Extracted {
        value: JobRequirement {
            job_id,
            organization,
            required_role,
            required_skills,
            required_certifications,
            required_education_level,
            required_experience_years,
            timezone_offset_hours,
            location: optional_string(obj.get("location")),
            raw_text: raw_jd.to_string(),
        },
        warnings: n.warnings,
    })
}

fn with_reprompt<T>(
    backend: &dyn Backend,
    request: CompletionRequest,
    parse: impl Fn(&str) -> std::result::Result<T, String>,
) -> Result<T> {
    let first = backend.complete(&request)?;
    let reason = match parse(&first.text) {
        Ok(v) => return Ok(v),
        Err(reason) => reason,
    };
    log::debug!("extraction reply unusable ({reason}), reprompting");
    let mut retry = request;
    retry.user_prompt.push_str(REPROMPT_SUFFIX);
    let second = backend.complete(&retry)?;
    parse(&second.text).map_err(|reason| Error::Extraction {
        reason,
        text: second.text,
    })
}

pub fn extract_talent(raw_cv: &str, backend: &dyn Backend) -> Result<Extracted<TalentProfile>> {
    if raw_cv.trim().is_empty() {
        return Err(Error::Invalid("CV text is empty".into()));
    }
    with_reprompt(backend, talent_prompt(raw_cv), |text| talent_from_response(raw_cv, text))
}

pub fn extract_job(raw_jd: &str, backend: &dyn Backend) -> Result<Extracted<JobRequirement>> {
    if raw_jd.trim().is_empty() {
        return Err(Error::Invalid("job description text is empty".into()));
    }
    with_reprompt(backend, job_prompt(raw_jd), |text| job_from_response(raw_jd, text))
}

/// Asks the backend for a CV of a fictional candidate suited to the given job description.
pub fn generate_cv_from_jd(raw_jd: &str, backend: &dyn Backend) -> Result<String> {
    if raw_jd.trim().is_empty() {
        return Err(Error::Invalid("job description text is empty".into()));
    }
    Ok(backend.complete(&cv_generation_prompt(raw_jd))?.text)
}
