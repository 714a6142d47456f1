use jobreco::domain::MatchConfig;
use jobreco::scoring::score_job;
use jobreco::synth::{generate_jd_set, sample_talent, AttributeCatalog, Tier};

struct SeedResult {
    exact_first: bool,
    means: [f64; 4],
    exact_score: f64,
    best_small: f64,
}

fn run_seed(catalog: &AttributeCatalog, seed: u64) -> SeedResult {
    let talent = sample_talent(catalog, seed).unwrap();
    let set = generate_jd_set(&talent, catalog, seed).unwrap();
    let config = MatchConfig::default();
    let scored: Vec<(Tier, String, f64)> = set
        .iter()
        .map(|t| (t.tier, t.job.job_id.clone(), score_job(&talent, &t.job, &config).unwrap().total))
        .collect();
    let mut ranked = scored.clone();
    ranked.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.1.cmp(&b.1)));
    let mut means = [0.0; 4];
    for (i, tier) in Tier::ALL.iter().enumerate() {
        let s: Vec<f64> = scored.iter().filter(|x| x.0 == *tier).map(|x| x.2).collect();
        means[i] = s.iter().sum::<f64>() / s.len() as f64;
    }
    let best_small = scored.iter().filter(|x| x.0 == Tier::Small).map(|x| x.2).fold(0.0, f64::max);
    SeedResult {
        exact_first: ranked[0].0 == Tier::Exact,
        means,
        exact_score: means[0],
        best_small,
    }
}

fn ordered(r: &SeedResult) -> bool {
    r.means[0] > r.means[1] && r.means[1] > r.means[2] && r.means[2] > r.means[3]
}

#[test]
fn tiers_order_over_fifty_seeds() {
    let catalog = AttributeCatalog::builtin();
    for seed in 0..50 {
        let r = run_seed(&catalog, seed);
        assert!(r.exact_first, "seed {seed}: exact job not ranked first");
        assert!(ordered(&r), "seed {seed}: tier means {:?}", r.means);
        assert!(r.exact_score >= r.best_small, "seed {seed}");
    }
}

#[test]
fn tiers_order_over_a_wider_sweep() {
    let catalog = AttributeCatalog::builtin();
    let mut gaps = [f64::INFINITY; 3];
    for seed in 1000..2000 {
        let r = run_seed(&catalog, seed);
        assert!(r.exact_first && ordered(&r), "seed {seed}: {:?}", r.means);
        for (i, g) in gaps.iter_mut().enumerate() {
            *g = g.min(r.means[i] - r.means[i + 1]);
        }
    }
    // smallest observed separation between adjacent tiers
    assert!(gaps.iter().all(|g| *g > 0.0), "{gaps:?}");
}

#[test]
fn generated_values_come_from_the_catalog() {
    let catalog = AttributeCatalog::builtin();
    let max_years = f64::from(catalog.experience_range[1]);
    for seed in 0..100 {
        let talent = sample_talent(&catalog, seed).unwrap();
        for t in generate_jd_set(&talent, &catalog, seed).unwrap() {
            let j = &t.job;
            assert!(catalog.roles.contains(&j.required_role));
            assert!(catalog.organizations.contains(&j.organization));
            assert!(j.required_skills.iter().all(|s| catalog.skills.contains(&s.skill_name)));
            assert!(j.required_certifications.iter().all(|c| catalog.certifications.contains(c)));
            assert!(catalog.education_levels.contains(&j.required_education_level));
            assert!(catalog.timezone_offsets.contains(&j.timezone_offset_hours));
            assert!((0.0..=max_years).contains(&j.required_experience_years), "{}", j.required_experience_years);
        }
    }
}

#[test]
fn generation_is_a_function_of_its_inputs() {
    let catalog = AttributeCatalog::builtin();
    let talent = sample_talent(&catalog, 5).unwrap();
    assert_eq!(
        generate_jd_set(&talent, &catalog, 9).unwrap(),
        generate_jd_set(&talent, &catalog, 9).unwrap()
    );
    assert_ne!(
        generate_jd_set(&talent, &catalog, 9).unwrap(),
        generate_jd_set(&talent, &catalog, 10).unwrap()
    );
}
