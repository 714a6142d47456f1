//! Comparing recommendations with manual reference scores, and measuring runs.
//!
//! Reference scores are guidelines assigned by a person, one per (talent,
//! job) pair in `[0, 1]`. Scored results are compared directly. Results
//! without scores are compared by rank: the algorithm's k-th pick is credited
//! with the reference score of the person's k-th best job and the deviation
//! is taken against the pick's own reference score.
//!
//! Accuracy is `100 * (1 - mean absolute deviation)`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use crate::backend::{Backend, MeteredBackend, TokenUsage};
use crate::domain::{JobRequirement, MatchConfig, Recommendation, SourceMethod, TalentProfile};
use crate::error::{Error, Result};
use crate::hybrid::{recommend_hybrid_observed, HybridParams, Stages};
use crate::llm_reco::{chunked_recommend, ChunkParams, GuidedCriteria, JobText, RecoMode};
use crate::scoring::recommend_deterministic;

/// Manual reference scores, `talent_id -> job_id -> score`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
#[serde(transparent)]
pub struct ReferenceScores(BTreeMap<String, BTreeMap<String, f64>>);

/// A JSON object that rejects repeated keys instead of keeping the last one.
struct UniqueMap<V>(BTreeMap<String, V>);

impl<'de, V: Deserialize<'de>> Deserialize<'de> for UniqueMap<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct UniqueMapVisitor<V>(std::marker::PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for UniqueMapVisitor<V> {
            type Value = UniqueMap<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object with unique keys")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = map.next_entry::<String, V>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format!("duplicate key `{k}`")));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        d.deserialize_map(UniqueMapVisitor(std::marker::PhantomData))
    }
}

impl<'de> Deserialize<'de> for ReferenceScores {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let outer = UniqueMap::<UniqueMap<f64>>::deserialize(d)?;
        let refs = ReferenceScores(outer.0.into_iter().map(|(t, m)| (t, m.0)).collect());
        if let Some(msg) = refs.first_out_of_range() {
            return Err(serde::de::Error::custom(msg));
        }
        Ok(refs)
    }
}

impl ReferenceScores {
    pub fn new(scores: BTreeMap<String, BTreeMap<String, f64>>) -> Result<Self> {
        let refs = Self(scores);
        match refs.first_out_of_range() {
            Some(msg) => Err(Error::Evaluation(msg)),
            None => Ok(refs),
        }
    }

    fn first_out_of_range(&self) -> Option<String> {
        self.0.iter().find_map(|(t, jobs)| {
            jobs.iter()
                .find(|(_, s)| !(0.0..=1.0).contains(*s))
                .map(|(j, s)| format!("reference score for ({t}, {j}) is {s}, outside [0, 1]"))
        })
    }

    pub fn get(&self, talent_id: &str, job_id: &str) -> Option<f64> {
        self.0.get(talent_id)?.get(job_id).copied()
    }

    pub fn for_talent(&self, talent_id: &str) -> Option<&BTreeMap<String, f64>> {
        self.0.get(talent_id)
    }

    /// The person's ranking for one talent: best first, ties by job id.
    pub fn ranking(&self, talent_id: &str) -> Vec<(&str, f64)> {
        let mut v: Vec<(&str, f64)> = self
            .0
            .get(talent_id)
            .map(|m| m.iter().map(|(j, s)| (j.as_str(), *s)).collect())
            .unwrap_or_default();
        v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        v
    }
}

/// One method's recommendations for one talent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationSet {
    pub talent_id: String,
    pub method: SourceMethod,
    pub recommendations: Vec<Recommendation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationEntry {
    pub talent_id: String,
    pub job_id: String,
    pub rank: usize,
    pub algorithm_score: f64,
    pub reference_score: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TalentSummary {
    pub talent_id: String,
    pub count: usize,
    pub mean_abs_deviation: f64,
    pub accuracy_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub entries: Vec<EvaluationEntry>,
    pub per_talent: Vec<TalentSummary>,
    /// Mean over all entries, not over talents.
    pub mean_abs_deviation: f64,
    pub accuracy_pct: f64,
}

pub fn accuracy_pct(mean_abs_deviation: f64) -> f64 {
    (100.0 * (1.0 - mean_abs_deviation)).clamp(0.0, 100.0)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    sum / n as f64
}

fn report(entries: Vec<EvaluationEntry>) -> Result<EvaluationReport> {
    if entries.is_empty() {
        return Err(Error::Evaluation("no recommendations to evaluate".into()));
    }
    let mut talents: Vec<&str> = Vec::new();
    for e in &entries {
        if !talents.contains(&e.talent_id.as_str()) {
            talents.push(&e.talent_id);
        }
    }
    let per_talent = talents
        .iter()
        .map(|t| {
            let mine: Vec<&EvaluationEntry> = entries.iter().filter(|e| e.talent_id == *t).collect();
            let mad = mean(mine.iter().map(|e| e.deviation));
            TalentSummary {
                talent_id: t.to_string(),
                count: mine.len(),
                mean_abs_deviation: mad,
                accuracy_pct: accuracy_pct(mad),
            }
        })
        .collect();
    let mad = mean(entries.iter().map(|e| e.deviation));
    Ok(EvaluationReport {
        per_talent,
        mean_abs_deviation: mad,
        accuracy_pct: accuracy_pct(mad),
        entries,
    })
}

fn reference(refs: &ReferenceScores, talent_id: &str, job_id: &str) -> Result<f64> {
    refs.get(talent_id, job_id)
        .ok_or_else(|| Error::Evaluation(format!("no reference score for ({talent_id}, {job_id})")))
}

fn by_rank(recs: &[Recommendation]) -> Vec<&Recommendation> {
    let mut v: Vec<&Recommendation> = recs.iter().collect();
    v.sort_by_key(|r| r.rank);
    v
}

/// Deviation of each recommendation's own score from its reference score.
pub fn evaluate_scored(sets: &[RecommendationSet], refs: &ReferenceScores) -> Result<EvaluationReport> {
    let mut entries = Vec::new();
    for set in sets {
        for rec in by_rank(&set.recommendations) {
            let score = rec.score.ok_or_else(|| {
                Error::Evaluation(format!(
                    "recommendation ({}, {}) has no score; evaluate it by rank",
                    set.talent_id, rec.job_id
                ))
            })?;
            let reference_score = reference(refs, &set.talent_id, &rec.job_id)?;
            entries.push(EvaluationEntry {
                talent_id: set.talent_id.clone(),
                job_id: rec.job_id.clone(),
                rank: rec.rank,
                algorithm_score: score,
                reference_score,
                deviation: (score - reference_score).abs(),
            });
        }
    }
    report(entries)
}

/// Rank-based comparison for results without scores.
pub fn evaluate_ranked(sets: &[RecommendationSet], refs: &ReferenceScores) -> Result<EvaluationReport> {
    let mut entries = Vec::new();
    for set in sets {
        let ranking = refs.ranking(&set.talent_id);
        let recs = by_rank(&set.recommendations);
        if recs.len() > ranking.len() {
            return Err(Error::Evaluation(format!(
                "{} recommendations for {} but only {} reference scores",
                recs.len(),
                set.talent_id,
                ranking.len()
            )));
        }
        for (k, rec) in recs.into_iter().enumerate() {
            let own = reference(refs, &set.talent_id, &rec.job_id)?;
            let assigned = ranking[k].1;
            entries.push(EvaluationEntry {
                talent_id: set.talent_id.clone(),
                job_id: rec.job_id.clone(),
                rank: rec.rank,
                algorithm_score: assigned,
                reference_score: own,
                deviation: (assigned - own).abs(),
            });
        }
    }
    report(entries)
}

/// Everything a single recommendation run may need; unused fields are ignored by the method.
#[derive(Debug, Clone)]
pub struct RunInputs<'a> {
    /// Required by the deterministic and hybrid methods.
    pub talent: Option<&'a TalentProfile>,
    /// CV text for the language-model methods; falls back to the talent's raw text.
    pub talent_raw: &'a str,
    pub jobs: &'a [JobRequirement],
    /// Scoring configuration; `top_n` is the number of final recommendations.
    pub config: &'a MatchConfig,
    /// Guided criteria; derived from `config` when absent.
    pub criteria: Option<&'a GuidedCriteria>,
    pub shortlist_k: usize,
    pub token_budget: usize,
    pub parallelism: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub recommendations: Vec<Recommendation>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stages: Option<Stages>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageMeasurement {
    pub stage: String,
    pub usage: TokenUsage,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMeasurement {
    pub method: SourceMethod,
    pub stages: Vec<StageMeasurement>,
    pub usage: TokenUsage,
    pub seconds: f64,
}

/// A run's result together with its measurement, which exists even when the run failed.
#[derive(Debug)]
pub struct Measured {
    pub outcome: Result<RunOutput>,
    pub measurement: RunMeasurement,
}

fn require_talent<'a>(inputs: &RunInputs<'a>) -> Result<&'a TalentProfile> {
    inputs
        .talent
        .ok_or_else(|| Error::Invalid("this method needs a structured talent profile".into()))
}

fn cv_text<'a>(inputs: &RunInputs<'a>) -> &'a str {
    match inputs.talent {
        Some(t) if inputs.talent_raw.trim().is_empty() => &t.raw_text,
        _ => inputs.talent_raw,
    }
}

/// Runs one method and records token usage and wall-clock time per stage.
///
/// Stages are `score` for deterministic runs, `recommend` for guided and
/// unguided runs, and `shortlist` then `rerank` for hybrid runs.
pub fn measure_run(method: SourceMethod, inputs: &RunInputs<'_>, backend: &dyn Backend) -> Measured {
    let metered = MeteredBackend::new(backend);
    let start = Instant::now();
    let mut stages: Vec<StageMeasurement> = Vec::new();
    let mut mark = (start, TokenUsage::default());
    let mut stage_done = |name: &'static str| {
        let now = Instant::now();
        let usage = metered.usage();
        stages.push(StageMeasurement {
            stage: name.to_string(),
            usage: usage.since(&mark.1),
            seconds: (now - mark.0).as_secs_f64(),
        });
        mark = (now, usage);
    };
    let top_n = inputs.config.top_n;
    let outcome = match method {
        SourceMethod::Deterministic => {
            let r = require_talent(inputs).and_then(|t| recommend_deterministic(t, inputs.jobs, inputs.config));
            stage_done("score");
            r.map(|recommendations| RunOutput {
                recommendations,
                warnings: Vec::new(),
                stages: None,
            })
        }
        SourceMethod::Guided | SourceMethod::Unguided => {
            let mode = if method == SourceMethod::Guided {
                let criteria = inputs
                    .criteria
                    .cloned()
                    .unwrap_or_else(|| GuidedCriteria::from_config(inputs.config));
                RecoMode::Guided(GuidedCriteria { top_n, ..criteria })
            } else {
                RecoMode::Unguided
            };
            let texts: Vec<JobText> = inputs.jobs.iter().map(JobText::from_job).collect();
            let params = ChunkParams {
                token_budget: inputs.token_budget,
                parallelism: inputs.parallelism,
                ..ChunkParams::new(top_n)
            };
            let r = chunked_recommend(cv_text(inputs), &texts, &mode, &params, &metered);
            stage_done("recommend");
            r.map(|o| RunOutput {
                recommendations: o.recommendations,
                warnings: o.warnings,
                stages: None,
            })
        }
        SourceMethod::Hybrid => {
            let params = HybridParams {
                shortlist_k: inputs.shortlist_k,
                final_n: top_n,
                token_budget: inputs.token_budget,
                parallelism: inputs.parallelism,
            };
            let r = require_talent(inputs).and_then(|t| {
                recommend_hybrid_observed(t, cv_text(inputs), inputs.jobs, inputs.config, &params, &metered, &mut stage_done)
            });
            r.map(|o| RunOutput {
                recommendations: o.recommendations,
                warnings: o.warnings,
                stages: Some(o.stages),
            })
        }
    };
    let measurement = RunMeasurement {
        method,
        usage: metered.usage(),
        seconds: start.elapsed().as_secs_f64(),
        stages,
    };
    Measured { outcome, measurement }
}
