//! Attribute model shared by talents and jobs, plus the matching configuration.
//!
//! Every string that takes part in matching (skill, certification and role
//! names) is stored in canonical form, see [`canonicalize`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PROFICIENCY: u8 = 5;
pub const MIN_EDUCATION: u8 = 1;
pub const MAX_EDUCATION: u8 = 5;
pub const MIN_TZ_OFFSET: f64 = -12.0;
pub const MAX_TZ_OFFSET: f64 = 14.0;

/// Lowercases, trims and collapses internal whitespace runs to one space.
pub fn canonicalize(s: &str) -> String {
    s.split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Orders identifiers so that embedded numbers compare numerically (`JD2 < JD10`).
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    fn chunks(s: &str) -> Vec<(bool, &str)> {
        let mut out = Vec::new();
        let mut start = 0;
        let mut prev_digit = None;
        for (i, c) in s.char_indices() {
            let digit = c.is_ascii_digit();
            if prev_digit.is_some_and(|p| p != digit) {
                out.push((prev_digit.unwrap(), &s[start..i]));
                start = i;
            }
            prev_digit = Some(digit);
        }
        if let Some(d) = prev_digit {
            out.push((d, &s[start..]));
        }
        out
    }
    let (ca, cb) = (chunks(a), chunks(b));
    for (x, y) in ca.iter().zip(cb.iter()) {
        let ord = match (x, y) {
            ((true, nx), (true, ny)) => {
                let tx = nx.trim_start_matches('0');
                let ty = ny.trim_start_matches('0');
                tx.len().cmp(&ty.len()).then_with(|| tx.cmp(ty))
            }
            ((_, sx), (_, sy)) => sx.cmp(sy),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    ca.len().cmp(&cb.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkillLevel {
    pub skill_name: String,
    pub proficiency: u8,
}

impl SkillLevel {
    pub fn new(skill_name: &str, proficiency: u8) -> Self {
        Self {
            skill_name: canonicalize(skill_name),
            proficiency,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TalentProfile {
    pub talent_id: String,
    pub role_preferences: Vec<String>,
    pub skills: Vec<SkillLevel>,
    #[serde(default)]
    pub certifications: BTreeSet<String>,
    pub education_level: u8,
    #[serde(default)]
    pub experience_by_role: BTreeMap<String, f64>,
    pub timezone_offset_hours: f64,
    #[serde(default)]
    pub preferred_location: Option<String>,
    #[serde(default)]
    pub raw_text: String,
}

impl TalentProfile {
    /// Years of experience in `role`, zero when the talent never held it.
    pub fn years_in_role(&self, role: &str) -> f64 {
        let role = canonicalize(role);
        self.experience_by_role
            .iter()
            .find(|(r, _)| canonicalize(r) == role)
            .map(|(_, y)| *y)
            .unwrap_or(0.0)
    }

    /// 1-based position of `role` in the preference list.
    pub fn preference_rank(&self, role: &str) -> Option<usize> {
        let role = canonicalize(role);
        self.role_preferences
            .iter()
            .position(|r| canonicalize(r) == role)
            .map(|i| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobRequirement {
    pub job_id: String,
    pub organization: String,
    pub required_role: String,
    pub required_skills: Vec<SkillLevel>,
    #[serde(default)]
    pub required_certifications: BTreeSet<String>,
    pub required_education_level: u8,
    pub required_experience_years: f64,
    pub timezone_offset_hours: f64,
    #[serde(default)]
    pub location: Option<String>,
    #[serde(default)]
    pub raw_text: String,
}

/// The six scored attributes. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attribute {
    Skills,
    Timezone,
    Certifications,
    Education,
    Experience,
    Role,
}

impl Attribute {
    pub const ALL: [Attribute; 6] = [
        Attribute::Skills,
        Attribute::Timezone,
        Attribute::Certifications,
        Attribute::Education,
        Attribute::Experience,
        Attribute::Role,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Attribute::Skills => "skills",
            Attribute::Timezone => "timezone",
            Attribute::Certifications => "certifications",
            Attribute::Education => "education",
            Attribute::Experience => "experience",
            Attribute::Role => "role",
        }
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Objective direction: which side of the requirement a talent value should fall on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Closer,
    Exact,
    Higher,
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchConfig {
    #[serde(default = "default_directions")]
    pub directions: BTreeMap<Attribute, Direction>,
    #[serde(default = "default_weights")]
    pub weights: BTreeMap<Attribute, f64>,
    #[serde(default = "default_top_n")]
    pub top_n: usize,
}

pub fn default_directions() -> BTreeMap<Attribute, Direction> {
    Attribute::ALL
        .into_iter()
        .map(|a| {
            let d = match a {
                Attribute::Certifications => Direction::Exact,
                Attribute::Experience => Direction::Higher,
                _ => Direction::Closer,
            };
            (a, d)
        })
        .collect()
}

pub fn default_weights() -> BTreeMap<Attribute, f64> {
    Attribute::ALL.into_iter().map(|a| (a, 1.0)).collect()
}

fn default_top_n() -> usize {
    3
}

impl Default for MatchConfig {
    fn default() -> Self {
        Self {
            directions: default_directions(),
            weights: default_weights(),
            top_n: default_top_n(),
        }
    }
}

impl MatchConfig {
    /// Direction for `attr`, falling back to the built-in default when not configured.
    pub fn direction(&self, attr: Attribute) -> Direction {
        self.directions
            .get(&attr)
            .copied()
            .unwrap_or_else(|| default_directions()[&attr])
    }

    /// Weight for `attr`; attributes missing from the map weigh 1.0.
    pub fn weight(&self, attr: Attribute) -> f64 {
        self.weights.get(&attr).copied().unwrap_or(1.0)
    }

    pub fn with_top_n(mut self, top_n: usize) -> Self {
        self.top_n = top_n;
        self
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (attr, w) in &self.weights {
            if !(w.is_finite() && *w >= 0.0) {
                out.push(Violation::new("weights", format!("{attr} weight must be a non-negative number, got {w}")));
            }
        }
        if !Attribute::ALL.iter().any(|a| self.weight(*a) > 0.0) {
            out.push(Violation::new("weights", "at least one weight must be positive"));
        }
        if self.top_n == 0 {
            out.push(Violation::new("top_n", "must be at least 1"));
        }
        out
    }
}

/// Where a recommendation came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceMethod {
    Deterministic,
    Guided,
    Unguided,
    Hybrid,
}

impl fmt::Display for SourceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceMethod::Deterministic => "deterministic",
            SourceMethod::Guided => "guided",
            SourceMethod::Unguided => "unguided",
            SourceMethod::Hybrid => "hybrid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recommendation {
    pub job_id: String,
    pub rank: usize,
    #[serde(default)]
    pub score: Option<f64>,
    #[serde(default)]
    pub benefits: Vec<String>,
    #[serde(default)]
    pub drawbacks: Vec<String>,
    #[serde(default)]
    pub qualitative_notes: Vec<String>,
    #[serde(default)]
    pub org_rating: Option<f64>,
    #[serde(default)]
    pub role_rating: Option<f64>,
    pub source_method: SourceMethod,
}

impl Recommendation {
    pub fn new(job_id: impl Into<String>, rank: usize, source_method: SourceMethod) -> Self {
        Self {
            job_id: job_id.into(),
            rank,
            score: None,
            benefits: Vec::new(),
            drawbacks: Vec::new(),
            qualitative_notes: Vec::new(),
            org_rating: None,
            role_rating: None,
            source_method,
        }
    }
}

/// Checks the result-set invariants: consecutive ranks from 1, scores in [0,1], ratings in [1,10].
pub fn validate_recommendations(recs: &[Recommendation]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ranks: Vec<usize> = recs.iter().map(|r| r.rank).collect();
    ranks.sort_unstable();
    if ranks.iter().enumerate().any(|(i, r)| *r != i + 1) {
        out.push(Violation::new("rank", "ranks must run 1..n without gaps or duplicates"));
    }
    for r in recs {
        if let Some(s) = r.score {
            if !(0.0..=1.0).contains(&s) {
                out.push(Violation::new("score", format!("{}: {s} outside [0, 1]", r.job_id)));
            }
        }
        for (field, v) in [("org_rating", r.org_rating), ("role_rating", r.role_rating)] {
            if let Some(v) = v {
                if !(1.0..=10.0).contains(&v) {
                    out.push(Violation::new(field, format!("{}: {v} outside [1, 10]", r.job_id)));
                }
            }
        }
    }
    out
}

/// One broken invariant, naming the field it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl Violation {
    pub fn new(field: impl Into<String>, rule: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

fn check_skills(field: &str, skills: &[SkillLevel], out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for s in skills {
        let name = canonicalize(&s.skill_name);
        if name.is_empty() {
            out.push(Violation::new(field, "skill_name must not be empty"));
            continue;
        }
        if s.proficiency > MAX_PROFICIENCY {
            out.push(Violation::new(
                field,
                format!("{name}: proficiency {} outside [0, {MAX_PROFICIENCY}]", s.proficiency),
            ));
        }
        if !seen.insert(name.clone()) {
            out.push(Violation::new(field, format!("duplicate skill `{name}`")));
        }
    }
}

fn check_education(field: &str, level: u8, out: &mut Vec<Violation>) {
    if !(MIN_EDUCATION..=MAX_EDUCATION).contains(&level) {
        out.push(Violation::new(
            field,
            format!("{level} outside [{MIN_EDUCATION}, {MAX_EDUCATION}]"),
        ));
    }
}

fn check_timezone(field: &str, tz: f64, out: &mut Vec<Violation>) {
    if !(MIN_TZ_OFFSET..=MAX_TZ_OFFSET).contains(&tz) {
        out.push(Violation::new(field, format!("{tz} outside [-12, +14]")));
    }
}

/// Lists every broken [`TalentProfile`] invariant; empty when the profile is well formed.
pub fn validate_profile(p: &TalentProfile) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.role_preferences.is_empty() {
        out.push(Violation::new("role_preferences", "must not be empty"));
    }
    let mut seen = HashSet::new();
    for role in &p.role_preferences {
        let c = canonicalize(role);
        if c.is_empty() {
            out.push(Violation::new("role_preferences", "role names must not be empty"));
        } else if !seen.insert(c.clone()) {
            out.push(Violation::new("role_preferences", format!("duplicate role `{c}`")));
        }
    }
    check_skills("skills", &p.skills, &mut out);
    check_education("education_level", p.education_level, &mut out);
    for (role, years) in &p.experience_by_role {
        if !(years.is_finite() && *years >= 0.0) {
            out.push(Violation::new(
                "experience_by_role",
                format!("{role}: years must be non-negative, got {years}"),
            ));
        }
    }
    check_timezone("timezone_offset_hours", p.timezone_offset_hours, &mut out);
    out
}

pub fn validate_job(j: &JobRequirement) -> Vec<Violation> {
    let mut out = Vec::new();
    if j.job_id.trim().is_empty() {
        out.push(Violation::new("job_id", "must not be empty"));
    }
    if canonicalize(&j.required_role).is_empty() {
        out.push(Violation::new("required_role", "must not be empty"));
    }
    check_skills("required_skills", &j.required_skills, &mut out);
    check_education("required_education_level", j.required_education_level, &mut out);
    if !(j.required_experience_years.is_finite() && j.required_experience_years >= 0.0) {
        out.push(Violation::new(
            "required_experience_years",
            format!("must be non-negative, got {}", j.required_experience_years),
        ));
    }
    check_timezone("timezone_offset_hours", j.timezone_offset_hours, &mut out);
    out
}

/// Validates every job plus catalog-level uniqueness of job ids.
pub fn validate_catalog(jobs: &[JobRequirement]) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for j in jobs {
        out.extend(validate_job(j).into_iter().map(|v| Violation {
            field: format!("{}.{}", j.job_id, v.field),
            rule: v.rule,
        }));
        if !ids.insert(j.job_id.as_str()) {
            out.push(Violation::new("job_id", format!("duplicate job id `{}`", j.job_id)));
        }
    }
    out
}

pub(crate) fn violations_to_error(what: &str, v: &[Violation]) -> Error {
    let joined = v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
    Error::Invalid(format!("{what}: {joined}"))
}

/// Reads a JSON document, rejecting unknown fields.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        context: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn profile() -> TalentProfile {
        TalentProfile {
            talent_id: "CV3".into(),
            role_preferences: vec!["full stack developer".into(), "technical lead".into()],
            skills: vec![SkillLevel::new("JavaScript", 3), SkillLevel::new("react", 4)],
            certifications: ["aws certified developer".to_string()].into(),
            education_level: 4,
            experience_by_role: [("full stack developer".to_string(), 6.0)].into(),
            timezone_offset_hours: 5.5,
            preferred_location: None,
            raw_text: String::new(),
        }
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize("  Full Stack  Developer "), "full stack developer");
        assert_eq!(canonicalize("AWS"), "aws");
        assert_eq!(canonicalize(""), "");
        assert_eq!(canonicalize("a\t\nb"), "a b");
    }

    #[test]
    fn well_formed_profile_has_no_violations() {
        assert!(validate_profile(&profile()).is_empty());
    }

    #[test]
    fn education_out_of_range_is_reported() {
        let mut p = profile();
        p.education_level = 7;
        let v = validate_profile(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "education_level");
    }

    #[test]
    fn duplicate_role_is_reported() {
        let mut p = profile();
        p.role_preferences.push("Full Stack Developer".into());
        let v = validate_profile(&p);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "role_preferences");
    }

    #[test]
    fn negative_experience_and_bad_timezone() {
        let mut p = profile();
        p.experience_by_role.insert("x".into(), -1.0);
        p.timezone_offset_hours = 15.0;
        let fields: Vec<_> = validate_profile(&p).into_iter().map(|v| v.field).collect();
        assert_eq!(fields, ["experience_by_role", "timezone_offset_hours"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v = serde_json::to_value(profile()).unwrap();
        v["salary"] = serde_json::json!(100);
        let err = serde_json::from_value::<TalentProfile>(v).unwrap_err();
        assert!(err.to_string().contains("salary"), "{err}");
    }

    #[test]
    fn unknown_attribute_name_is_rejected() {
        let err = serde_json::from_str::<MatchConfig>(r#"{"weights": {"skilz": 1.0}}"#).unwrap_err();
        assert!(err.to_string().contains("skilz"), "{err}");
    }

    #[test]
    fn match_config_validation() {
        let mut c = MatchConfig::default();
        assert!(c.validate().is_empty());
        for w in c.weights.values_mut() {
            *w = 0.0;
        }
        c.top_n = 0;
        assert_eq!(c.validate().len(), 2);
    }

    #[test]
    fn catalog_rejects_duplicate_ids() {
        let job = JobRequirement {
            job_id: "JD1".into(),
            organization: "Acme".into(),
            required_role: "devops engineer".into(),
            required_skills: vec![],
            required_certifications: BTreeSet::new(),
            required_education_level: 3,
            required_experience_years: 2.0,
            timezone_offset_hours: 0.0,
            location: None,
            raw_text: String::new(),
        };
        let v = validate_catalog(&[job.clone(), job]);
        assert_eq!(v.len(), 1);
        assert!(v[0].rule.contains("duplicate"));
    }

    #[test]
    fn natural_order_of_ids() {
        let mut ids = vec!["JD10", "JD2", "JD1", "JD9"];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ids, ["JD1", "JD2", "JD9", "JD10"]);
    }

    fn arb_profile() -> impl Strategy<Value = (TalentProfile, bool)> {
        (
            prop::collection::vec(prop::sample::select(vec!["dev", "lead", "qa", "ops"]), 0..4),
            prop::collection::vec((prop::sample::select(vec!["go", "rust", "sql"]), 0u8..8), 0..4),
            0u8..8,
            prop::collection::vec(-3.0f64..20.0, 0..3),
            -15.0f64..17.0,
        )
            .prop_map(|(roles, skills, edu, exp, tz)| {
                let roles: Vec<String> = roles.into_iter().map(String::from).collect();
                let uniq_roles = roles.iter().collect::<HashSet<_>>().len() == roles.len();
                let skill_names: Vec<_> = skills.iter().map(|(n, _)| *n).collect();
                let uniq_skills = skill_names.iter().collect::<HashSet<_>>().len() == skill_names.len();
                let ok = !roles.is_empty()
                    && uniq_roles
                    && uniq_skills
                    && skills.iter().all(|(_, p)| *p <= 5)
                    && (1..=5).contains(&edu)
                    && exp.iter().all(|y| *y >= 0.0)
                    && (-12.0..=14.0).contains(&tz);
                let p = TalentProfile {
                    talent_id: "t".into(),
                    role_preferences: roles,
                    skills: skills.into_iter().map(|(n, p)| SkillLevel::new(n, p)).collect(),
                    certifications: BTreeSet::new(),
                    education_level: edu,
                    experience_by_role: exp.into_iter().enumerate().map(|(i, y)| (format!("r{i}"), y)).collect(),
                    timezone_offset_hours: tz,
                    preferred_location: None,
                    raw_text: String::new(),
                };
                (p, ok)
            })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(s in "\\PC{0,40}") {
            let once = canonicalize(&s);
            prop_assert_eq!(canonicalize(&once), once);
        }

        #[test]
        fn validate_profile_matches_invariants((p, ok) in arb_profile()) {
            prop_assert_eq!(validate_profile(&p).is_empty(), ok);
        }
    }
}
