use serde::Serialize;

use crate::backend::{effective_budget, Backend, DEFAULT_TOKEN_LIMIT};
use crate::domain::natural_cmp;
use crate::error::{Error, Result};
use crate::parallel::map_bounded;

use super::{prompt, recommend_single, JobText, RecoMode, RecoOutcome};

/// Partition of a catalog into subsets whose prompts fit the token budget.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChunkPlan {
    pub subsets: Vec<Vec<String>>,
    pub per_subset_top_k: usize,
    pub token_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkParams {
    pub top_n: usize,
    /// Winners kept per subset; defaults to `top_n`.
    pub per_subset_top_k: Option<usize>,
    /// Context window in tokens; the usable budget keeps a safety margin.
    pub token_budget: usize,
    pub parallelism: usize,
}

impl ChunkParams {
    pub fn new(top_n: usize) -> Self {
        Self {
            top_n,
            per_subset_top_k: None,
            token_budget: DEFAULT_TOKEN_LIMIT,
            parallelism: 4,
        }
    }

    fn subset_k(&self) -> usize {
        self.per_subset_top_k.unwrap_or(self.top_n)
    }
}

/// Greedy first-fit over the jobs in id order: a job joins the current
/// subset while the rendered prompt stays within budget.
pub fn plan_chunks(
    jds_raw: &[JobText],
    talent_raw: &str,
    mode: &RecoMode,
    token_budget: usize,
    per_subset_top_k: usize,
) -> Result<ChunkPlan> {
    if jds_raw.is_empty() {
        return Err(Error::Invalid("job catalog is empty".into()));
    }
    if per_subset_top_k == 0 {
        return Err(Error::Invalid("per_subset_top_k must be at least 1".into()));
    }
    let budget = effective_budget(token_budget);
    let mut ordered: Vec<&JobText> = jds_raw.iter().collect();
    ordered.sort_by(|a, b| natural_cmp(&a.job_id, &b.job_id));

    let cost = |subset: &[&JobText]| {
        prompt::prompt_cost(&prompt::render(talent_raw, subset, mode, per_subset_top_k))
    };
    let mut subsets: Vec<Vec<&JobText>> = Vec::new();
    let mut current: Vec<&JobText> = Vec::new();
    for jd in ordered {
        current.push(jd);
        if cost(&current) <= budget {
            continue;
        }
        current.pop();
        let alone = cost(&[jd]);
        if alone > budget {
            return Err(Error::Oversize {
                job_id: jd.job_id.clone(),
                needed: alone,
                budget,
            });
        }
        subsets.push(std::mem::replace(&mut current, vec![jd]));
    }
    subsets.push(current);
    Ok(ChunkPlan {
        subsets: subsets
            .into_iter()
            .map(|s| s.into_iter().map(|j| j.job_id.clone()).collect())
            .collect(),
        per_subset_top_k,
        token_budget,
    })
}

/// Splits the catalog, recommends per subset, then selects the overall
/// winners with one more call over the union of subset winners.
///
/// Only the top `per_subset_top_k` of each subset reach the merge, so a job
/// ranked just below the cut in one subset can lose to a weaker winner from
/// another. When the winners themselves exceed the budget the merge is
/// chunked again.
pub fn chunked_recommend(
    talent_raw: &str,
    jds_raw: &[JobText],
    mode: &RecoMode,
    params: &ChunkParams,
    backend: &dyn Backend,
) -> Result<RecoOutcome> {
    if let RecoMode::Guided(c) = mode {
        c.validate()?;
    }
    if params.top_n == 0 {
        return Err(Error::Invalid("top_n must be at least 1".into()));
    }
    let k = params.subset_k();
    let plan = plan_chunks(jds_raw, talent_raw, mode, params.token_budget, k)?;
    if plan.subsets.len() == 1 {
        return recommend_single(talent_raw, jds_raw, mode, params.top_n, params.token_budget, backend);
    }
    log::debug!("catalog of {} jobs split into {} subsets", jds_raw.len(), plan.subsets.len());

    let subsets: Vec<Vec<JobText>> = plan
        .subsets
        .iter()
        .map(|ids| {
            ids.iter()
                .map(|id| jds_raw.iter().find(|j| &j.job_id == id).cloned().expect("planned ids come from the catalog"))
                .collect()
        })
        .collect();
    let results = map_bounded(&subsets, params.parallelism, |i, subset| {
        recommend_single(talent_raw, subset, mode, k, params.token_budget, backend).map_err(|e| Error::subset(i, e))
    });

    let mut warnings = Vec::new();
    let mut winners: Vec<JobText> = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let out = r?;
        warnings.extend(out.warnings.into_iter().map(|w| format!("subset {i}: {w}")));
        for rec in out.recommendations {
            if !winners.iter().any(|w| w.job_id == rec.job_id) {
                let jd = subsets[i].iter().find(|j| j.job_id == rec.job_id).expect("parser checks membership");
                winners.push(jd.clone());
            }
        }
    }
    if winners.len() >= jds_raw.len() {
        return Err(Error::Invalid(format!(
            "per-subset selection keeps all {} jobs; lower per_subset_top_k so the merge can shrink the pool",
            jds_raw.len()
        )));
    }
    let merged = chunked_recommend(talent_raw, &winners, mode, params, backend)?;
    warnings.extend(merged.warnings);
    Ok(RecoOutcome {
        recommendations: merged.recommendations,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ScriptedBackend;

    fn jds(n: usize, len: usize) -> Vec<JobText> {
        (1..=n).map(|i| JobText::new(format!("JD{i}"), "y".repeat(len))).collect()
    }

    /// Smallest window whose usable budget admits exactly the prompt for `fit` jobs.
    fn window_for(fit: &[JobText], k: usize) -> usize {
        let refs: Vec<&JobText> = fit.iter().collect();
        let cost = prompt::prompt_cost(&prompt::render("cv", &refs, &RecoMode::Unguided, k));
        (cost as f64 / 0.9).ceil() as usize
    }

    #[test]
    fn generous_budget_gives_one_subset() {
        let plan = plan_chunks(&jds(10, 40), "cv", &RecoMode::Unguided, 8192, 3).unwrap();
        assert_eq!(plan.subsets.len(), 1);
        assert_eq!(plan.subsets[0].len(), 10);
        assert_eq!(plan.subsets[0][9], "JD10");
    }

    #[test]
    fn budget_for_five_gives_two_ordered_subsets() {
        let all = jds(10, 400);
        let window = window_for(&all[..5], 3);
        let plan = plan_chunks(&all, "cv", &RecoMode::Unguided, window, 3).unwrap();
        assert_eq!(
            plan.subsets,
            vec![
                vec!["JD1", "JD2", "JD3", "JD4", "JD5"],
                vec!["JD6", "JD7", "JD8", "JD9", "JD10"]
            ]
        );
    }

    #[test]
    fn oversize_job_is_named() {
        let mut all = jds(3, 40);
        all[1].text = "z".repeat(50_000);
        let err = plan_chunks(&all, "cv", &RecoMode::Unguided, 8192, 3).unwrap_err();
        assert!(matches!(err, Error::Oversize { ref job_id, .. } if job_id == "JD2"));
    }

    #[test]
    fn single_subset_matches_direct_call() {
        let all = jds(4, 40);
        let b = ScriptedBackend::from_pairs([("", "JD3\n- good\n\nJD1\n- ok")]).unwrap();
        let direct = super::super::recommend_unguided("cv", &all, 2, &b).unwrap();
        let chunked = chunked_recommend("cv", &all, &RecoMode::Unguided, &ChunkParams::new(2), &b).unwrap();
        assert_eq!(direct, chunked);
        let reqs = b.requests();
        assert_eq!(reqs[0], reqs[1]);
    }

    #[test]
    fn subset_errors_carry_the_index() {
        let all = jds(10, 400);
        let window = window_for(&all[..5], 3);
        let b = ScriptedBackend::from_pairs([("### JOB JD1\n", "JD1\n- a\nJD2\n- b\nJD3\n- c")]).unwrap();
        let params = ChunkParams {
            token_budget: window,
            per_subset_top_k: Some(3),
            parallelism: 1,
            ..ChunkParams::new(3)
        };
        let err = chunked_recommend("cv", &all, &RecoMode::Unguided, &params, &b).unwrap_err();
        assert!(matches!(err, Error::Subset { index: 1, .. }), "{err}");
        assert!(err.is_backend());
    }
}
