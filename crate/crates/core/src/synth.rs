//! Seeded synthetic talents and graded job sets.
//!
//! For every sampled talent ten jobs are generated in four tiers: one near
//! exact match, three with small deviations, three with large deviations and
//! three that are quite different. Every value is drawn from an
//! [`AttributeCatalog`], so generation is closed-world and a pure function of
//! (talent, catalog, seed).
//!
//! The perturbations are sized against the deterministic scorer, whose
//! `1/d` rule cannot tell a one-step deviation from an exact match. Small
//! deviations therefore move proficiency by two levels, the time zone to a
//! neighbouring catalog offset, required experience up by a quarter, or add
//! one skill the talent lacks. Large deviations add at least one of a missing
//! certification, a two-level education change or a lower role preference on
//! top of two or three further steps.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::backend::{Backend, CompletionRequest};
use crate::domain::{
    canonicalize, validate_job, validate_profile, violations_to_error, JobRequirement, SkillLevel, TalentProfile,
    Violation,
};
use crate::error::{Error, Result};

/// Identifies the generator so a dataset can be reproduced elsewhere.
pub const PRNG_ID: &str = "ChaCha8 (rand_chacha 0.9, SeedableRng::seed_from_u64)";

pub const JDS_PER_CV: usize = 10;

const BUILTIN_CATALOG: &str = include_str!("../data/it_catalog.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeCatalog {
    pub version: String,
    pub roles: Vec<String>,
    pub skills: Vec<String>,
    pub certifications: Vec<String>,
    pub education_levels: Vec<u8>,
    pub timezone_offsets: Vec<f64>,
    /// Inclusive bounds in whole years.
    pub experience_range: [u32; 2],
    #[serde(default = "default_organizations")]
    pub organizations: Vec<String>,
}

fn default_organizations() -> Vec<String> {
    vec!["Example Corp".into()]
}

impl AttributeCatalog {
    /// The IT catalog shipped with the crate.
    pub fn builtin() -> Self {
        serde_json::from_str(BUILTIN_CATALOG).expect("bundled catalog is valid JSON")
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (field, len) in [
            ("roles", self.roles.len()),
            ("skills", self.skills.len()),
            ("certifications", self.certifications.len()),
            ("education_levels", self.education_levels.len()),
            ("timezone_offsets", self.timezone_offsets.len()),
            ("organizations", self.organizations.len()),
        ] {
            if len == 0 {
                out.push(Violation::new(field, "must not be empty"));
            }
        }
        if self.education_levels.iter().any(|e| !(1..=5).contains(e)) {
            out.push(Violation::new("education_levels", "levels must lie in 1..=5"));
        }
        if self.timezone_offsets.iter().any(|t| !(-12.0..=14.0).contains(t)) {
            out.push(Violation::new("timezone_offsets", "offsets must lie in [-12, +14]"));
        }
        let [lo, hi] = self.experience_range;
        if lo > hi {
            out.push(Violation::new("experience_range", format!("min {lo} exceeds max {hi}")));
        }
        let distinct: BTreeSet<String> = self.roles.iter().map(|r| canonicalize(r)).collect();
        if distinct.len() != self.roles.len() {
            out.push(Violation::new("roles", "role names must be distinct"));
        }
        out
    }

    fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(violations_to_error("attribute catalog", &v))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exact,
    Small,
    Large,
    Different,
}

impl Tier {
    pub const ALL: [Tier; 4] = [Tier::Exact, Tier::Small, Tier::Large, Tier::Different];

    /// Jobs per tier in one set; the counts sum to [`JDS_PER_CV`].
    pub fn count(self) -> usize {
        match self {
            Tier::Exact => 1,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieredJob {
    pub tier: Tier,
    pub job: JobRequirement,
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("catalog lists are validated non-empty")
}

fn pick_some<T: Clone>(rng: &mut ChaCha8Rng, items: &[T], n: usize) -> Vec<T> {
    items.choose_multiple(rng, n).cloned().collect()
}

/// Samples one structured talent. The id is `cv-<seed>`.
pub fn sample_talent(catalog: &AttributeCatalog, seed: u64) -> Result<TalentProfile> {
    catalog.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_roles = rng.random_range(2..=3).min(catalog.roles.len());
    let role_preferences: Vec<String> = pick_some(&mut rng, &catalog.roles, n_roles)
        .iter()
        .map(|r| canonicalize(r))
        .collect();
    let n_skills = rng.random_range(4..=6).min(catalog.skills.len());
    let skills = pick_some(&mut rng, &catalog.skills, n_skills)
        .iter()
        .map(|s| SkillLevel::new(s, rng.random_range(1..=5)))
        .collect();
    let n_certs = rng.random_range(0..=2).min(catalog.certifications.len());
    let certifications = pick_some(&mut rng, &catalog.certifications, n_certs)
        .iter()
        .map(|c| canonicalize(c))
        .collect();
    let education_level = *pick(&mut rng, &catalog.education_levels);
    let [lo, hi] = catalog.experience_range;
    let experience_by_role = role_preferences
        .iter()
        .map(|r| (r.clone(), f64::from(rng.random_range(lo..=hi))))
        .collect();
    let timezone_offset_hours = *pick(&mut rng, &catalog.timezone_offsets);
    Ok(TalentProfile {
        talent_id: format!("cv-{seed}"),
        role_preferences,
        skills,
        certifications,
        education_level,
        experience_by_role,
        timezone_offset_hours,
        preferred_location: None,
        raw_text: String::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Proficiency,
    Timezone,
    Experience,
    ExtraSkill,
    Certification,
    Education,
    Role,
}

const MINOR: [Step; 4] = [Step::Proficiency, Step::Timezone, Step::Experience, Step::ExtraSkill];
const MAJOR: [Step; 3] = [Step::Certification, Step::Education, Step::Role];

struct Perturber<'a> {
    talent: &'a TalentProfile,
    catalog: &'a AttributeCatalog,
}

impl Perturber<'_> {
    fn unheld_skills(&self, job: &JobRequirement) -> Vec<String> {
        let taken: BTreeSet<String> = self
            .talent
            .skills
            .iter()
            .chain(&job.required_skills)
            .map(|s| canonicalize(&s.skill_name))
            .collect();
        self.catalog
            .skills
            .iter()
            .map(|s| canonicalize(s))
            .filter(|s| !taken.contains(s))
            .collect()
    }

    fn unheld_certs(&self, job: &JobRequirement) -> Vec<String> {
        self.catalog
            .certifications
            .iter()
            .map(|c| canonicalize(c))
            .filter(|c| !self.talent.certifications.contains(c) && !job.required_certifications.contains(c))
            .collect()
    }

    fn raised_experience(&self, job: &JobRequirement, large: bool) -> Option<f64> {
        let max = f64::from(self.catalog.experience_range[1]);
        let held = self.talent.years_in_role(&job.required_role);
        let want = match (large, held >= 1.0) {
            (false, true) => held * 1.25,
            (false, false) => return None,
            (true, true) => held * 1.5,
            (true, false) => held + 2.0,
        };
        let want = want.min(max);
        (want > held && want > job.required_experience_years).then_some(want)
    }

    fn applicable(&self, step: Step, job: &JobRequirement, large: bool) -> bool {
        match step {
            Step::Proficiency => !job.required_skills.is_empty(),
            Step::Timezone => self.catalog.timezone_offsets.len() > 1,
            Step::Experience => self.raised_experience(job, large).is_some(),
            Step::ExtraSkill => !self.unheld_skills(job).is_empty(),
            Step::Certification => !self.unheld_certs(job).is_empty(),
            Step::Education => self.education_options(job.required_education_level, 2).next().is_some(),
            Step::Role => self.talent.role_preferences.len() > 1,
        }
    }

    fn education_options(&self, level: u8, by: i16) -> impl Iterator<Item = u8> + '_ {
        [-by, by].into_iter().filter_map(move |d| {
            let target = i16::from(level) + d;
            self.catalog
                .education_levels
                .iter()
                .copied()
                .find(|l| i16::from(*l) == target)
        })
    }

    /// Large deviations take one or two steps of the same kind, small ones exactly one.
    fn apply(&self, step: Step, job: &mut JobRequirement, rng: &mut ChaCha8Rng, large: bool) {
        let magnitude = if large { rng.random_range(1..=2) } else { 1 };
        match step {
            Step::Proficiency => {
                let idx: Vec<usize> = (0..job.required_skills.len()).collect();
                for i in pick_some(rng, &idx, magnitude.min(idx.len())) {
                    let p = i16::from(job.required_skills[i].proficiency);
                    let options: Vec<i16> = [p - 2, p + 2].into_iter().filter(|v| (1..=5).contains(v)).collect();
                    job.required_skills[i].proficiency = *pick(rng, &options) as u8;
                }
            }
            Step::Timezone => {
                let offsets = &self.catalog.timezone_offsets;
                let here = offsets
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        (*a - job.timezone_offset_hours)
                            .abs()
                            .total_cmp(&(*b - job.timezone_offset_hours).abs())
                    })
                    .map(|(i, _)| i as i64)
                    .unwrap_or(0);
                let within = |d: i64| -> Vec<i64> {
                    [here - d, here + d]
                        .into_iter()
                        .filter(|i| (0..offsets.len() as i64).contains(i))
                        .collect()
                };
                let mut targets = within(magnitude as i64);
                if targets.is_empty() {
                    targets = within(1);
                }
                let choice = *pick(rng, &targets);
                job.timezone_offset_hours = offsets[choice as usize];
            }
            Step::Experience => {
                if let Some(v) = self.raised_experience(job, large) {
                    job.required_experience_years = v;
                }
            }
            Step::ExtraSkill => {
                let unheld = self.unheld_skills(job);
                for s in pick_some(rng, &unheld, magnitude.min(unheld.len())) {
                    job.required_skills.push(SkillLevel::new(&s, rng.random_range(1..=5)));
                }
            }
            Step::Certification => {
                let unheld = self.unheld_certs(job);
                job.required_certifications.insert(pick(rng, &unheld).clone());
            }
            Step::Education => {
                let options: Vec<u8> = self.education_options(job.required_education_level, 2).collect();
                job.required_education_level = *pick(rng, &options);
            }
            Step::Role => {
                let prefs = &self.talent.role_preferences;
                let role = pick(rng, &prefs[1..prefs.len().min(3)]).clone();
                job.required_experience_years = self.talent.years_in_role(&role);
                job.required_role = role;
            }
        }
    }

    fn base(&self, rng: &mut ChaCha8Rng) -> JobRequirement {
        let role = self.talent.role_preferences[0].clone();
        JobRequirement {
            job_id: String::new(),
            organization: pick(rng, &self.catalog.organizations).clone(),
            required_experience_years: self.talent.years_in_role(&role),
            required_role: role,
            required_skills: self.talent.skills.clone(),
            required_certifications: self.talent.certifications.clone(),
            required_education_level: self.talent.education_level,
            timezone_offset_hours: self.talent.timezone_offset_hours,
            location: None,
            raw_text: String::new(),
        }
    }

    fn exact(&self, rng: &mut ChaCha8Rng) -> JobRequirement {
        let mut job = self.base(rng);
        if !job.required_skills.is_empty() && rng.random_bool(0.5) {
            let i = rng.random_range(0..job.required_skills.len());
            let p = i16::from(job.required_skills[i].proficiency);
            let options: Vec<i16> = [p - 1, p + 1].into_iter().filter(|v| (1..=5).contains(v)).collect();
            job.required_skills[i].proficiency = *pick(rng, &options) as u8;
        }
        job
    }

    fn small(&self, rng: &mut ChaCha8Rng) -> JobRequirement {
        let mut job = self.base(rng);
        let steps: Vec<Step> = MINOR.into_iter().filter(|s| self.applicable(*s, &job, false)).collect();
        let n = rng.random_range(1..=2).min(steps.len());
        for step in pick_some(rng, &steps, n) {
            self.apply(step, &mut job, rng, false);
        }
        job
    }

    fn large(&self, rng: &mut ChaCha8Rng) -> JobRequirement {
        let mut job = self.base(rng);
        let majors: Vec<Step> = MAJOR.into_iter().filter(|s| self.applicable(*s, &job, true)).collect();
        if let Some(step) = majors.choose(rng) {
            self.apply(*step, &mut job, rng, true);
        }
        let minors: Vec<Step> = MINOR.into_iter().filter(|s| self.applicable(*s, &job, true)).collect();
        let n = rng.random_range(2..=3).min(minors.len());
        for step in pick_some(rng, &minors, n) {
            self.apply(step, &mut job, rng, true);
        }
        job
    }

    fn different(&self, rng: &mut ChaCha8Rng, other_roles: &[String]) -> JobRequirement {
        let held: BTreeSet<String> = self.talent.skills.iter().map(|s| canonicalize(&s.skill_name)).collect();
        let mut pool: Vec<String> = self.catalog.skills.iter().map(|s| canonicalize(s)).filter(|s| !held.contains(s)).collect();
        if pool.len() < 4 {
            pool = self.catalog.skills.iter().map(|s| canonicalize(s)).collect();
        }
        let n_skills = rng.random_range(4..=6).min(pool.len());
        let required_skills = pick_some(rng, &pool, n_skills)
            .iter()
            .map(|s| SkillLevel::new(s, rng.random_range(1..=5)))
            .collect();
        let certs: Vec<String> = self
            .catalog
            .certifications
            .iter()
            .map(|c| canonicalize(c))
            .filter(|c| !self.talent.certifications.contains(c))
            .collect();
        let n_certs = rng.random_range(1..=2).min(certs.len());
        let education: Vec<u8> = self
            .catalog
            .education_levels
            .iter()
            .copied()
            .filter(|e| *e != self.talent.education_level)
            .collect();
        let offsets: Vec<f64> = self
            .catalog
            .timezone_offsets
            .iter()
            .copied()
            .filter(|t| *t != self.talent.timezone_offset_hours)
            .collect();
        let [lo, hi] = self.catalog.experience_range;
        JobRequirement {
            job_id: String::new(),
            organization: pick(rng, &self.catalog.organizations).clone(),
            required_role: pick(rng, other_roles).clone(),
            required_skills,
            required_certifications: pick_some(rng, &certs, n_certs).into_iter().collect(),
            required_education_level: *education.choose(rng).unwrap_or(&self.talent.education_level),
            required_experience_years: f64::from(rng.random_range(lo.max(1)..=hi.max(1))),
            timezone_offset_hours: *offsets.choose(rng).unwrap_or(&self.talent.timezone_offset_hours),
            location: None,
            raw_text: String::new(),
        }
    }
}

/// Ten graded jobs for `talent`, ids `JD1..JD10` assigned in shuffled tier order.
/// Returned in id order.
pub fn generate_jd_set(talent: &TalentProfile, catalog: &AttributeCatalog, seed: u64) -> Result<Vec<TieredJob>> {
    catalog.check()?;
    let v = validate_profile(talent);
    if !v.is_empty() {
        return Err(violations_to_error("talent profile", &v));
    }
    let prefs: BTreeSet<String> = talent.role_preferences.iter().map(|r| canonicalize(r)).collect();
    let other_roles: Vec<String> = catalog
        .roles
        .iter()
        .map(|r| canonicalize(r))
        .filter(|r| !prefs.contains(r))
        .collect();
    if other_roles.is_empty() {
        return Err(Error::Invalid(
            "the catalog has no role outside the talent's preferences for the different tier".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tiers: Vec<Tier> = Tier::ALL.iter().flat_map(|t| std::iter::repeat_n(*t, t.count())).collect();
    tiers.shuffle(&mut rng);
    let p = Perturber { talent, catalog };
    Ok(tiers
        .into_iter()
        .enumerate()
        .map(|(i, tier)| {
            let mut job = match tier {
                Tier::Exact => p.exact(&mut rng),
                Tier::Small => p.small(&mut rng),
                Tier::Large => p.large(&mut rng),
                Tier::Different => p.different(&mut rng, &other_roles),
            };
            job.job_id = format!("JD{}", i + 1);
            TieredJob { tier, job }
        })
        .collect())
}

/// A structured record to turn into prose.
#[derive(Debug, Clone, Copy)]
pub enum Structured<'a> {
    Talent(&'a TalentProfile),
    Job(&'a JobRequirement),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rendered {
    pub text: String,
    pub warnings: Vec<String>,
}

pub fn render_prompt(structured: Structured<'_>) -> CompletionRequest {
    let (what, json) = match structured {
        Structured::Talent(t) => ("a realistic CV (resume) for this candidate", serde_json::to_string_pretty(t)),
        Structured::Job(j) => ("a realistic job description for this opening", serde_json::to_string_pretty(j)),
    };
    let user = format!(
        "Write {what}. Mention every role, skill, certification and organization by name and state the \
         years of experience and education level explicitly. Skill proficiency runs from 1 (beginner) to \
         5 (advanced). Write plain prose without JSON.\n\n{}",
        json.expect("structured records serialize")
    );
    CompletionRequest::new("You write realistic recruiting documents.", user).with_max_output_tokens(900)
}

fn years(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        v.to_string()
    }
}

/// Structured values that do not appear in `text`.
///
/// Names and experience figures are checked; proficiency levels and time
/// zones are not, since prose rarely states them as bare numbers.
pub fn coverage_gaps(structured: Structured<'_>, text: &str) -> Vec<String> {
    let hay = canonicalize(text);
    let mut expected: Vec<(&str, String)> = Vec::new();
    match structured {
        Structured::Talent(t) => {
            expected.extend(t.role_preferences.iter().map(|r| ("role", canonicalize(r))));
            expected.extend(t.skills.iter().map(|s| ("skill", canonicalize(&s.skill_name))));
            expected.extend(t.certifications.iter().map(|c| ("certification", canonicalize(c))));
            expected.extend(t.experience_by_role.values().map(|y| ("experience years", years(*y))));
        }
        Structured::Job(j) => {
            expected.push(("role", canonicalize(&j.required_role)));
            expected.push(("organization", canonicalize(&j.organization)));
            expected.extend(j.required_skills.iter().map(|s| ("skill", canonicalize(&s.skill_name))));
            expected.extend(j.required_certifications.iter().map(|c| ("certification", canonicalize(c))));
            expected.push(("experience years", years(j.required_experience_years)));
        }
    }
    expected
        .into_iter()
        .filter(|(_, v)| !hay.contains(v.as_str()))
        .map(|(kind, v)| format!("{kind} `{v}`"))
        .collect()
}

/// Asks the backend for prose and reports structured values it left out.
pub fn render_unstructured(structured: Structured<'_>, backend: &dyn Backend) -> Result<Rendered> {
    let v = match structured {
        Structured::Talent(t) => validate_profile(t),
        Structured::Job(j) => validate_job(j),
    };
    if !v.is_empty() {
        return Err(violations_to_error("structured record", &v));
    }
    let text = backend.complete(&render_prompt(structured))?.text.trim().to_string();
    let gaps = coverage_gaps(structured, &text);
    let warnings = if gaps.is_empty() {
        Vec::new()
    } else {
        vec![format!("render incomplete, missing {}", gaps.join(", "))]
    };
    Ok(Rendered { text, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ScriptedBackend;

    #[test]
    fn builtin_catalog_is_valid() {
        let c = AttributeCatalog::builtin();
        assert!(c.validate().is_empty());
        assert_eq!(c.roles.len(), 8);
        assert_eq!(c.skills.len(), 20);
        assert_eq!(c.certifications.len(), 6);
    }

    #[test]
    fn same_seed_same_talent() {
        let c = AttributeCatalog::builtin();
        assert_eq!(sample_talent(&c, 7).unwrap(), sample_talent(&c, 7).unwrap());
    }

    #[test]
    fn seeds_give_different_talents() {
        let c = AttributeCatalog::builtin();
        for s in 0..100u64 {
            let mut a = sample_talent(&c, s).unwrap();
            let mut b = sample_talent(&c, s + 1000).unwrap();
            a.talent_id.clear();
            b.talent_id.clear();
            assert_ne!(a, b, "seed {s}");
        }
    }

    #[test]
    fn single_role_catalog_gives_single_preference() {
        let mut c = AttributeCatalog::builtin();
        c.roles.truncate(1);
        let t = sample_talent(&c, 3).unwrap();
        assert_eq!(t.role_preferences, vec!["full stack developer"]);
        assert!(generate_jd_set(&t, &c, 3).is_err());
    }

    #[test]
    fn sampled_talent_respects_bounds() {
        let c = AttributeCatalog::builtin();
        for s in 0..200 {
            let t = sample_talent(&c, s).unwrap();
            assert!((2..=3).contains(&t.role_preferences.len()));
            assert!((4..=6).contains(&t.skills.len()));
            assert!(t.certifications.len() <= 2);
            assert!(t.skills.iter().all(|k| (1..=5).contains(&k.proficiency)));
            assert_eq!(t.experience_by_role.len(), t.role_preferences.len());
            assert!(validate_profile(&t).is_empty());
        }
    }

    #[test]
    fn jd_set_has_ten_jobs_in_tier_counts() {
        let c = AttributeCatalog::builtin();
        let t = sample_talent(&c, 11).unwrap();
        let set = generate_jd_set(&t, &c, 11).unwrap();
        assert_eq!(set.len(), JDS_PER_CV);
        for tier in Tier::ALL {
            assert_eq!(set.iter().filter(|j| j.tier == tier).count(), tier.count());
        }
        let ids: Vec<&str> = set.iter().map(|j| j.job.job_id.as_str()).collect();
        assert_eq!(ids, ["JD1", "JD2", "JD3", "JD4", "JD5", "JD6", "JD7", "JD8", "JD9", "JD10"]);
        assert_eq!(set, generate_jd_set(&t, &c, 11).unwrap());
    }

    fn job7() -> JobRequirement {
        JobRequirement {
            job_id: "JD7".into(),
            organization: "Google".into(),
            required_role: "full stack developer".into(),
            required_skills: vec![SkillLevel::new("react", 4), SkillLevel::new("node.js", 4)],
            required_certifications: ["aws certified solutions architect".to_string()].into(),
            required_education_level: 4,
            required_experience_years: 6.0,
            timezone_offset_hours: 5.5,
            location: None,
            raw_text: String::new(),
        }
    }

    #[test]
    fn full_rendering_has_no_warning() {
        let text = "Google is hiring a Full Stack Developer with 6 years of experience in React and Node.js. \
                    The AWS Certified Solutions Architect credential is required.";
        let b = ScriptedBackend::from_pairs([("", text)]).unwrap();
        let r = render_unstructured(Structured::Job(&job7()), &b).unwrap();
        assert_eq!(r.text, text);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
    }

    #[test]
    fn omitted_skill_is_reported() {
        let text = "Google is hiring a Full Stack Developer with 6 years of React. AWS Certified Solutions Architect.";
        let b = ScriptedBackend::from_pairs([("", text)]).unwrap();
        let r = render_unstructured(Structured::Job(&job7()), &b).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(r.warnings[0].contains("skill `node.js`"), "{}", r.warnings[0]);
        assert!(!r.warnings[0].contains("react"));
    }

    #[test]
    fn no_skills_means_no_skill_check() {
        let mut j = job7();
        j.required_skills.clear();
        let gaps = coverage_gaps(Structured::Job(&j), "google full stack developer 6 aws certified solutions architect");
        assert!(gaps.is_empty(), "{gaps:?}");
    }
}
