use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use jobreco::backend::{Backend, BackendError, CompletionRequest, CompletionResponse, LiveBackend, ScriptRule, ScriptedBackend, TranscriptBackend};
use jobreco::domain::{read_json, JobRequirement, MatchConfig, Recommendation, SourceMethod};
use jobreco::eval::{evaluate_ranked, evaluate_scored, measure_run, RecommendationSet, ReferenceScores, RunInputs, RunMeasurement};
use jobreco::extract::{extract_job, extract_talent, generate_cv_from_jd};
use jobreco::hybrid::{rate_org_and_role, rate_recommendations, recommend_hybrid, HybridParams, Stages};
use jobreco::llm_reco::{chunked_recommend, ChunkParams, GuidedCriteria, RecoMode};
use jobreco::parallel::map_bounded;
use jobreco::scoring::{display_score, recommend_deterministic};
use jobreco::synth::{generate_jd_set, render_unstructured, sample_talent, AttributeCatalog, Structured, Tier, PRNG_ID};
use serde::Serialize;

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::inputs::{load_jobs, load_talent, read_one_or_many, read_text, stem, to_json, write_json, write_text, Catalog, TalentInput};
use crate::{Command, Mode, RunArgs};

pub(crate) struct Context {
    pub config: Config,
    pub scripted: Option<PathBuf>,
    pub transcript: Option<PathBuf>,
}

/// Stands in when no backend is configured; every call fails with a backend error.
struct Unconfigured(String);

impl Backend for Unconfigured {
    fn name(&self) -> &str {
        "unconfigured"
    }

    fn complete(&self, _: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        Err(BackendError::Missing(self.0.clone()))
    }
}

impl Context {
    fn parallelism(&self) -> usize {
        self.config.limits.parallelism
    }

    fn token_budget(&self) -> usize {
        self.config.limits.token_budget
    }

    fn backend_configured(&self) -> bool {
        self.scripted.is_some() || self.config.backend_requested()
    }

    /// The configured backend, wrapped for transcripts when asked.
    fn backend(&self) -> CliResult<Box<dyn Backend>> {
        let inner: Box<dyn Backend> = match &self.scripted {
            Some(path) => {
                let rules: Vec<ScriptRule> = read_json(path)?;
                Box::new(ScriptedBackend::new(rules).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?)
            }
            None => {
                let live = self.config.live().map_err(|why| jobreco::Error::Backend(BackendError::Missing(why)))?;
                Box::new(LiveBackend::new(live).map_err(jobreco::Error::Backend)?)
            }
        };
        match &self.transcript {
            Some(dir) => Ok(Box::new(TranscriptBackend::new(inner, dir).map_err(|e| CliError::io(dir, e))?)),
            None => Ok(inner),
        }
    }

    /// Like [`Context::backend`], but deferring the missing-backend error to the first call.
    fn backend_or_placeholder(&self) -> CliResult<Box<dyn Backend>> {
        if self.backend_configured() {
            return self.backend();
        }
        let why = self.config.live().err().unwrap_or_default();
        Ok(Box::new(Unconfigured(why)))
    }

    fn match_config(&self) -> &MatchConfig {
        &self.config.matching
    }
}

pub(crate) fn execute(ctx: &Context, command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Extract { job, generate_cv, files } => extract(ctx, job, generate_cv, &files, out, err),
        Command::Synth { catalog, cvs, seed, out: dir } => synth(ctx, catalog.as_deref(), cvs, seed, &dir, out, err),
        Command::Recommend { mode, run, pretty } => recommend(ctx, mode, &run, pretty, out, err),
        Command::Rate { jobs, recs } => rate(ctx, &jobs, recs.as_deref(), out, err),
        Command::Evaluate { recs, refs, ranked } => evaluate(&recs, &refs, ranked, out),
        Command::Bench { mode, run, json } => bench(ctx, &mode, &run, json, out, err),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn warn_all(err: &mut dyn Write, warnings: &[String]) {
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
}

fn first_error<T>(results: Vec<CliResult<T>>) -> CliResult<Vec<T>> {
    results.into_iter().collect()
}

fn extract(
    ctx: &Context,
    job: bool,
    generate_cv: bool,
    files: &[PathBuf],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    let backend = ctx.backend()?;
    let results = map_bounded(files, ctx.parallelism(), |_, path| -> CliResult<(Vec<PathBuf>, Vec<String>)> {
        let text = read_text(path)?;
        let id = stem(path);
        let dir = path.parent().unwrap_or(Path::new(""));
        let target = dir.join(format!("{id}.structured.json"));
        let mut written = vec![target.clone()];
        let warnings = if job {
            let mut x = extract_job(&text, &backend)?;
            x.value.job_id = id.clone();
            write_json(&target, &x.value)?;
            if generate_cv {
                let cv = generate_cv_from_jd(&text, &backend)?;
                let cv_path = dir.join(format!("{id}.cv.txt"));
                write_text(&cv_path, &cv)?;
                written.push(cv_path);
            }
            x.warnings
        } else {
            let mut x = extract_talent(&text, &backend)?;
            x.value.talent_id = id.clone();
            write_json(&target, &x.value)?;
            x.warnings
        };
        Ok((written, warnings.into_iter().map(|w| format!("{}: {w}", path.display())).collect()))
    });
    let mut failure = None;
    for r in results {
        match r {
            Ok((written, warnings)) => {
                warn_all(err, &warnings);
                for p in written {
                    emit(out, &format!("{}\n", p.display()))?;
                }
            }
            Err(e) if failure.is_none() => failure = Some(e),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
            }
        }
    }
    failure.map_or(Ok(()), Err)
}

#[derive(Serialize)]
struct SynthMeta<'a> {
    prng: &'a str,
    seed: u64,
    cvs: usize,
    catalog_version: &'a str,
    rendered: bool,
}

fn synth(
    ctx: &Context,
    catalog: Option<&Path>,
    cvs: usize,
    seed: u64,
    dir: &Path,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CliResult<()> {
    if cvs == 0 {
        return Err(CliError::Usage("--cvs must be at least 1".into()));
    }
    let catalog: AttributeCatalog = match catalog {
        Some(p) => read_json(p)?,
        None => AttributeCatalog::builtin(),
    };
    let problems = catalog.validate();
    if !problems.is_empty() {
        let list: Vec<String> = problems.iter().map(ToString::to_string).collect();
        return Err(CliError::Data(format!("attribute catalog: {}", list.join("; "))));
    }
    let backend = if ctx.backend_configured() {
        Some(ctx.backend()?)
    } else {
        log::info!("no backend configured; writing structured records only");
        None
    };

    for i in 1..=cvs {
        let cv_seed = seed.wrapping_add(i as u64 - 1);
        let mut talent = sample_talent(&catalog, cv_seed)?;
        talent.talent_id = format!("CV{i}");
        let tiered = generate_jd_set(&talent, &catalog, cv_seed)?;
        let mut jobs: Vec<JobRequirement> = tiered.iter().map(|t| t.job.clone()).collect();
        let tiers: std::collections::BTreeMap<&str, Tier> = tiered.iter().map(|t| (t.job.job_id.as_str(), t.tier)).collect();
        let cv_dir = dir.join(format!("CV{i}"));

        if let Some(backend) = &backend {
            let mut items = vec![Structured::Talent(&talent)];
            items.extend(jobs.iter().map(Structured::Job));
            let rendered = first_error(
                map_bounded(&items, ctx.parallelism(), |_, s| render_unstructured(*s, backend.as_ref()))
                    .into_iter()
                    .map(|r| r.map_err(CliError::from))
                    .collect(),
            )?;
            let names: Vec<String> = std::iter::once("cv".to_string()).chain(jobs.iter().map(|j| j.job_id.clone())).collect();
            for (name, r) in names.iter().zip(&rendered) {
                warn_all(err, &r.warnings.iter().map(|w| format!("CV{i}/{name}: {w}")).collect::<Vec<_>>());
                write_text(&cv_dir.join("text").join(format!("{name}.txt")), &r.text)?;
            }
            talent.raw_text = rendered[0].text.clone();
            for (j, r) in jobs.iter_mut().zip(&rendered[1..]) {
                j.raw_text = r.text.clone();
            }
        }
        write_json(&cv_dir.join("talent.json"), &talent)?;
        write_json(&cv_dir.join("jobs.json"), &jobs)?;
        write_json(&cv_dir.join("tiers.json"), &tiers)?;
        emit(out, &format!("{}\n", cv_dir.display()))?;
    }
    write_json(
        &dir.join("meta.json"),
        &SynthMeta {
            prng: PRNG_ID,
            seed,
            cvs,
            catalog_version: &catalog.version,
            rendered: backend.is_some(),
        },
    )
}

#[derive(Serialize)]
struct RecommendOutput<'a> {
    talent_id: &'a str,
    method: SourceMethod,
    recommendations: Vec<Recommendation>,
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<Stages>,
}

fn criteria(path: Option<&Path>, config: &MatchConfig) -> CliResult<GuidedCriteria> {
    let c = match path {
        None => GuidedCriteria::from_config(config),
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) => {
            let c: GuidedCriteria = read_json(p)?;
            GuidedCriteria { top_n: config.top_n, ..c }
        }
        Some(p) => GuidedCriteria::new(read_text(p)?, config.top_n),
    };
    c.validate()?;
    Ok(c)
}

struct Loaded {
    talent: TalentInput,
    catalog: Catalog,
}

fn load(run: &RunArgs) -> CliResult<Loaded> {
    Ok(Loaded {
        talent: load_talent(run.talent.talent.as_deref(), run.talent.structured_talent.as_deref())?,
        catalog: load_jobs(&run.jobs)?,
    })
}

fn recommend(ctx: &Context, mode: Mode, run: &RunArgs, pretty: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let Loaded { talent, catalog } = load(run)?;
    let config = ctx.match_config();
    let top_n = config.top_n;
    let mut warnings = Vec::new();
    let mut stages = None;
    let recommendations = match mode {
        Mode::Deterministic => {
            let profile = talent.require_structured("deterministic")?;
            let (jobs, w) = catalog.structured("deterministic")?;
            warnings.extend(w);
            recommend_deterministic(profile, jobs, config)?
        }
        Mode::Guided | Mode::Unguided => {
            let reco_mode = match mode {
                Mode::Guided => RecoMode::Guided(criteria(run.criteria.as_deref(), config)?),
                _ => RecoMode::Unguided,
            };
            let cv = talent.require_text(if mode == Mode::Guided { "guided" } else { "unguided" })?;
            let backend = ctx.backend()?;
            let params = ChunkParams {
                token_budget: ctx.token_budget(),
                parallelism: ctx.parallelism(),
                ..ChunkParams::new(top_n)
            };
            let o = chunked_recommend(cv, &catalog.texts(), &reco_mode, &params, &backend)?;
            warnings.extend(o.warnings);
            o.recommendations
        }
        Mode::Hybrid => {
            let profile = talent.require_structured("hybrid")?;
            let cv = talent.require_text("hybrid")?;
            let (jobs, w) = catalog.structured("hybrid")?;
            warnings.extend(w);
            let backend = ctx.backend()?;
            let params = HybridParams {
                shortlist_k: run.shortlist,
                final_n: top_n,
                token_budget: ctx.token_budget(),
                parallelism: ctx.parallelism(),
            };
            let o = recommend_hybrid(profile, cv, jobs, config, &params, &backend)?;
            warnings.extend(o.warnings);
            stages = Some(o.stages);
            o.recommendations
        }
    };
    warn_all(err, &warnings);
    let output = RecommendOutput {
        talent_id: &talent.id,
        method: mode.into(),
        recommendations,
        warnings,
        stages,
    };
    if pretty {
        emit(out, &table(&output))
    } else {
        emit(out, &to_json(&output))
    }
}

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".into())
}

fn table(o: &RecommendOutput<'_>) -> String {
    let mut s = format!("{} recommendations for {}\n", o.method, o.talent_id);
    let _ = writeln!(s, "{:>4}  {:<12} {:>6} {:>6} {:>6}", "rank", "job", "score", "org", "role");
    for r in &o.recommendations {
        let _ = writeln!(
            s,
            "{:>4}  {:<12} {:>6} {:>6} {:>6}",
            r.rank,
            r.job_id,
            opt(r.score, display_score),
            opt(r.org_rating, |x| format!("{x:.1}")),
            opt(r.role_rating, |x| format!("{x:.1}")),
        );
        for b in &r.benefits {
            let _ = writeln!(s, "        + {b}");
        }
        for d in &r.drawbacks {
            let _ = writeln!(s, "        - {d}");
        }
        for n in &r.qualitative_notes {
            let _ = writeln!(s, "        . {n}");
        }
    }
    s
}

#[derive(Serialize)]
struct JobRating<'a> {
    job_id: &'a str,
    organization: &'a str,
    required_role: &'a str,
    org_rating: f64,
    role_rating: f64,
    rationale: String,
    warnings: Vec<String>,
}

fn rate(ctx: &Context, jobs: &Path, recs: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let catalog = load_jobs(jobs)?;
    let (jobs, w) = catalog.structured("rating")?;
    warn_all(err, &w);
    if let Some(recs) = recs {
        let mut sets: Vec<RecommendationSet> = read_one_or_many(recs)?;
        for set in &sets {
            if let Some(r) = set.recommendations.iter().find(|r| !jobs.iter().any(|j| j.job_id == r.job_id)) {
                return Err(CliError::Data(format!("{}: job `{}` is not in the catalog", recs.display(), r.job_id)));
            }
        }
        let backend = ctx.backend()?;
        for set in &mut sets {
            let warnings = rate_recommendations(&mut set.recommendations, jobs, ctx.parallelism(), &backend);
            warn_all(err, &warnings);
        }
        return emit(out, &to_json(&sets));
    }
    let backend = ctx.backend()?;
    let ratings = map_bounded(jobs, ctx.parallelism(), |_, job| rate_org_and_role(job, &backend));
    let mut rows = Vec::new();
    for (job, r) in jobs.iter().zip(ratings) {
        let r = r?;
        warn_all(err, &r.warnings.iter().map(|w| format!("{}: {w}", job.job_id)).collect::<Vec<_>>());
        rows.push(JobRating {
            job_id: &job.job_id,
            organization: &job.organization,
            required_role: &job.required_role,
            org_rating: r.org_rating,
            role_rating: r.role_rating,
            rationale: r.rationale,
            warnings: r.warnings,
        });
    }
    emit(out, &to_json(&rows))
}

fn evaluate(recs: &[PathBuf], refs: &Path, ranked: bool, out: &mut dyn Write) -> CliResult<()> {
    let mut sets: Vec<RecommendationSet> = Vec::new();
    for p in recs {
        sets.extend(read_one_or_many(p)?);
    }
    let refs: ReferenceScores = read_json(refs)?;
    let report = if ranked {
        evaluate_ranked(&sets, &refs)?
    } else {
        evaluate_scored(&sets, &refs)?
    };
    emit(out, &to_json(&report))
}

fn bench(ctx: &Context, modes: &[Mode], run: &RunArgs, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let Loaded { talent, catalog } = load(run)?;
    let (jobs, w) = catalog.structured("bench")?;
    warn_all(err, &w);
    let needs_model = modes.iter().any(|m| *m != Mode::Deterministic);
    let backend = if needs_model { ctx.backend()? } else { ctx.backend_or_placeholder()? };
    let criteria = if modes.contains(&Mode::Guided) {
        Some(criteria(run.criteria.as_deref(), ctx.match_config())?)
    } else {
        None
    };
    let inputs = RunInputs {
        talent: talent.structured.as_ref(),
        talent_raw: &talent.raw,
        jobs,
        config: ctx.match_config(),
        criteria: criteria.as_ref(),
        shortlist_k: run.shortlist,
        token_budget: ctx.token_budget(),
        parallelism: ctx.parallelism(),
    };
    let mut measurements: Vec<RunMeasurement> = Vec::new();
    let mut failure: Option<CliError> = None;
    for m in modes {
        let measured = measure_run((*m).into(), &inputs, &backend);
        match measured.outcome {
            Ok(o) => warn_all(err, &o.warnings),
            Err(e) => {
                let e = CliError::from(e);
                if failure.is_none() {
                    failure = Some(e);
                } else {
                    let _ = writeln!(err, "error: {}: {e}", measured.measurement.method);
                }
            }
        }
        measurements.push(measured.measurement);
    }
    if json {
        emit(out, &to_json(&measurements))?;
    } else {
        emit(out, &bench_table(&measurements))?;
    }
    failure.map_or(Ok(()), Err)
}

fn bench_table(ms: &[RunMeasurement]) -> String {
    let mut s = format!(
        "{:<14} {:<10} {:>6} {:>13} {:>14} {:>9}\n",
        "method", "stage", "calls", "input_tokens", "output_tokens", "seconds"
    );
    for m in ms {
        for st in &m.stages {
            let _ = writeln!(
                s,
                "{:<14} {:<10} {:>6} {:>13} {:>14} {:>9.3}",
                m.method.to_string(),
                st.stage,
                st.usage.calls,
                st.usage.input_tokens,
                st.usage.output_tokens,
                st.seconds
            );
        }
        let _ = writeln!(
            s,
            "{:<14} {:<10} {:>6} {:>13} {:>14} {:>9.3}",
            m.method.to_string(),
            "total",
            m.usage.calls,
            m.usage.input_tokens,
            m.usage.output_tokens,
            m.seconds
        );
    }
    s
}
