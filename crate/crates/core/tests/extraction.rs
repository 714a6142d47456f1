use std::collections::{BTreeMap, BTreeSet};

use jobreco::backend::ScriptedBackend;
use jobreco::domain::{validate_job, validate_profile, JobRequirement, SkillLevel, TalentProfile};
use jobreco::extract::{extract_job, extract_talent};
use proptest::prelude::*;

fn name() -> impl Strategy<Value = String> {
    "[a-z][a-z.+#]{1,10}( [a-z]{2,8})?"
}

fn skills() -> impl Strategy<Value = Vec<SkillLevel>> {
    prop::collection::btree_map(name(), 0u8..=5, 0..6)
        .prop_map(|m| m.into_iter().map(|(n, p)| SkillLevel::new(&n, p)).collect())
}

prop_compose! {
    fn talent()(
        roles in prop::collection::btree_set(name(), 1..4),
        skills in skills(),
        certs in prop::collection::btree_set(name(), 0..3),
        edu in 1u8..=5,
        years in prop::collection::vec(0u8..=30, 3),
        tz in prop::sample::select(vec![-8.0, -5.0, 0.0, 1.0, 5.5, 8.0, 12.75]),
    ) -> TalentProfile {
        let role_preferences: Vec<String> = roles.into_iter().collect();
        let experience_by_role: BTreeMap<String, f64> = role_preferences
            .iter()
            .zip(years)
            .map(|(r, y)| (r.clone(), f64::from(y)))
            .collect();
        TalentProfile {
            talent_id: "T1".into(),
            role_preferences,
            skills,
            certifications: certs,
            education_level: edu,
            experience_by_role,
            timezone_offset_hours: tz,
            preferred_location: None,
            raw_text: String::new(),
        }
    }
}

prop_compose! {
    fn job()(
        role in name(),
        org in "[A-Z][a-z]{2,8}",
        skills in skills(),
        certs in prop::collection::btree_set(name(), 0..3),
        edu in 1u8..=5,
        years in 0u8..=20,
        tz in -12i8..=14,
    ) -> JobRequirement {
        JobRequirement {
            job_id: "JD1".into(),
            organization: org,
            required_role: role,
            required_skills: skills,
            required_certifications: certs,
            required_education_level: edu,
            required_experience_years: f64::from(years),
            timezone_offset_hours: f64::from(tz),
            location: None,
            raw_text: String::new(),
        }
    }
}

fn wrapped(json: &str) -> String {
    format!("Here is the structured record you asked for:\n```json\n{json}\n```\nLet me know if anything is missing.")
}

proptest! {
    #[test]
    fn talent_round_trips(t in talent()) {
        prop_assume!(validate_profile(&t).is_empty());
        let reply = wrapped(&serde_json::to_string_pretty(&t).unwrap());
        let b = ScriptedBackend::from_pairs([("", reply.as_str())]).unwrap();
        let got = extract_talent("cv text", &b).unwrap();
        prop_assert!(got.warnings.is_empty(), "{:?}", got.warnings);
        let mut expected = t.clone();
        expected.raw_text = "cv text".into();
        prop_assert_eq!(got.value, expected);
    }

    #[test]
    fn job_round_trips(j in job()) {
        prop_assume!(validate_job(&j).is_empty());
        let reply = wrapped(&serde_json::to_string(&j).unwrap());
        let b = ScriptedBackend::from_pairs([("", reply.as_str())]).unwrap();
        let got = extract_job("jd text", &b).unwrap();
        let mut expected = j.clone();
        expected.raw_text = "jd text".into();
        prop_assert_eq!(got.value, expected);
    }

    /// Extraction only reports names that the reply contains.
    #[test]
    fn nothing_is_invented(t in talent(), drop_skills in any::<bool>(), drop_certs in any::<bool>()) {
        let mut v = serde_json::to_value(&t).unwrap();
        let obj = v.as_object_mut().unwrap();
        if drop_skills {
            obj.remove("skills");
        }
        if drop_certs {
            obj.remove("certifications");
        }
        obj.remove("talent_id");
        let reply = serde_json::to_string(&v).unwrap();
        let b = ScriptedBackend::from_pairs([("", reply.as_str())]).unwrap();
        let got = extract_talent("some cv", &b).unwrap().value;
        let sent_skills: BTreeSet<&str> = if drop_skills { BTreeSet::new() } else { t.skills.iter().map(|s| s.skill_name.as_str()).collect() };
        prop_assert!(got.skills.iter().all(|s| sent_skills.contains(s.skill_name.as_str())));
        if drop_certs {
            prop_assert!(got.certifications.is_empty());
        } else {
            prop_assert_eq!(&got.certifications, &t.certifications);
        }
        prop_assert!(got.role_preferences.iter().all(|r| t.role_preferences.contains(r)));
        prop_assert!(got.talent_id.starts_with("cv-"));
    }
}

#[test]
fn extraction_of_the_fixture_cv() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/cv3/talent.json");
    let mut t: TalentProfile = jobreco::domain::read_json(&path).unwrap();
    let cv = std::mem::take(&mut t.raw_text);
    let reply = wrapped(&serde_json::to_string(&t).unwrap());
    let b = ScriptedBackend::from_pairs([("Priya Raman", reply.as_str())]).unwrap();
    let got = extract_talent(&cv, &b).unwrap();
    assert_eq!(got.value.skills.len(), 5);
    assert_eq!(got.value.raw_text, cv);
}
