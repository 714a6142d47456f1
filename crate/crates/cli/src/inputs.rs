//! Reading talents and job catalogs from files and directories.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use jobreco::domain::{natural_cmp, read_json, JobRequirement, TalentProfile};
use jobreco::llm_reco::JobText;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    write_text(path, &to_json(value))
}

/// File name without its last extension.
pub fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn is_txt(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("txt"))
}

/// Reads a JSON file holding either one `T` or an array of them.
pub fn read_one_or_many<T: DeserializeOwned>(path: &Path) -> CliResult<Vec<T>> {
    let value: serde_json::Value = read_json(path)?;
    let parsed = if value.is_array() {
        serde_json::from_value(value)
    } else {
        serde_json::from_value(value).map(|one| vec![one])
    };
    parsed.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// The candidate as given on the command line.
#[derive(Debug, Clone)]
pub struct TalentInput {
    pub structured: Option<TalentProfile>,
    /// CV text; the structured profile's raw text when no text file was given.
    pub raw: String,
    pub id: String,
}

impl TalentInput {
    pub fn require_structured(&self, mode: &str) -> CliResult<&TalentProfile> {
        self.structured.as_ref().ok_or_else(|| {
            CliError::Usage(format!(
                "{mode} mode needs a structured talent profile: pass --structured-talent <file> or a .json file to --talent"
            ))
        })
    }

    pub fn require_text(&self, mode: &str) -> CliResult<&str> {
        if self.raw.trim().is_empty() {
            return Err(CliError::Usage(format!(
                "{mode} mode needs CV text: pass --talent <cv.txt> or a structured talent with raw_text"
            )));
        }
        Ok(&self.raw)
    }
}

/// `talent` may be CV text or, when it ends in `.json`, a structured profile.
pub fn load_talent(talent: Option<&Path>, structured: Option<&Path>) -> CliResult<TalentInput> {
    let mut profile: Option<TalentProfile> = match structured {
        Some(p) => Some(read_json(p)?),
        None => None,
    };
    let mut raw = String::new();
    match talent {
        Some(p) if is_json(p) => {
            if profile.is_some() {
                return Err(CliError::Usage(
                    "--talent is a JSON profile and --structured-talent is also given; pass the CV text to --talent".into(),
                ));
            }
            profile = Some(read_json(p)?);
        }
        Some(p) => raw = read_text(p)?,
        None => {}
    }
    if profile.is_none() && talent.is_none() {
        return Err(CliError::Usage("pass --talent <file> and/or --structured-talent <file>".into()));
    }
    if raw.trim().is_empty() {
        if let Some(p) = &profile {
            raw = p.raw_text.clone();
        }
    }
    let id = match (&profile, talent) {
        (Some(p), _) => p.talent_id.clone(),
        (None, Some(p)) => stem(p),
        (None, None) => unreachable!("checked above"),
    };
    Ok(TalentInput {
        structured: profile,
        raw,
        id,
    })
}

/// Jobs read from `--jobs`: structured records, plus descriptions that only exist as text.
#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub jobs: Vec<JobRequirement>,
    pub text_only: Vec<JobText>,
}

impl Catalog {
    /// Every job as the model sees it, in natural id order.
    pub fn texts(&self) -> Vec<JobText> {
        let mut all: Vec<JobText> = self.jobs.iter().map(JobText::from_job).chain(self.text_only.iter().cloned()).collect();
        all.sort_by(|a, b| natural_cmp(&a.job_id, &b.job_id));
        all
    }

    /// The structured jobs, with a warning for each text-only job left out.
    pub fn structured(&self, mode: &str) -> CliResult<(&[JobRequirement], Vec<String>)> {
        if self.jobs.is_empty() {
            return Err(CliError::Usage(format!(
                "{mode} mode needs structured jobs (.json); run `jobreco extract --job` on the descriptions first"
            )));
        }
        let warnings = self
            .text_only
            .iter()
            .map(|t| format!("{}: no structured record, skipped by {mode} scoring", t.job_id))
            .collect();
        Ok((&self.jobs, warnings))
    }
}

/// Loads a catalog from a JSON file, a text file, or a directory of both.
///
/// In a directory a `<id>.txt` file supplies the text of the structured job
/// `<id>` when that job has none; otherwise it is a text-only job.
pub fn load_jobs(path: &Path) -> CliResult<Catalog> {
    let files: Vec<PathBuf> = if path.is_dir() {
        let mut v: Vec<PathBuf> = std::fs::read_dir(path)
            .map_err(|e| CliError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && (is_json(p) || is_txt(p)))
            .collect();
        v.sort();
        v
    } else {
        vec![path.to_path_buf()]
    };

    let mut catalog = Catalog::default();
    let mut texts: Vec<JobText> = Vec::new();
    for f in &files {
        if is_txt(f) {
            texts.push(JobText::new(stem(f), read_text(f)?));
        } else {
            catalog.jobs.extend(read_one_or_many::<JobRequirement>(f)?);
        }
    }
    for t in texts {
        match catalog.jobs.iter_mut().find(|j| j.job_id == t.job_id) {
            Some(j) if j.raw_text.trim().is_empty() => j.raw_text = t.text,
            Some(_) => log::debug!("{}: structured record already carries its text", t.job_id),
            None => catalog.text_only.push(t),
        }
    }

    let mut seen = BTreeSet::new();
    for id in catalog.jobs.iter().map(|j| &j.job_id).chain(catalog.text_only.iter().map(|t| &t.job_id)) {
        if !seen.insert(id.clone()) {
            return Err(CliError::Data(format!("{}: job id `{id}` appears more than once", path.display())));
        }
    }
    if seen.is_empty() {
        return Err(CliError::Data(format!("{}: no jobs found", path.display())));
    }
    catalog.jobs.sort_by(|a, b| natural_cmp(&a.job_id, &b.job_id));
    catalog.text_only.sort_by(|a, b| natural_cmp(&a.job_id, &b.job_id));
    Ok(catalog)
}

#[cfg(test)]
mod tests {
    use super::*;

    const JOB: &str = r#"{"job_id": "JD2", "organization": "SAP", "required_role": "technical lead",
        "required_skills": [{"skill_name": "java", "proficiency": 3}], "required_education_level": 3,
        "required_experience_years": 2, "timezone_offset_hours": 1}"#;

    #[test]
    fn directory_mixes_json_and_text() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.json"), JOB).unwrap();
        std::fs::write(dir.path().join("JD2.txt"), "Lead a Java team at SAP.").unwrap();
        std::fs::write(dir.path().join("JD10.txt"), "Write tests.").unwrap();
        std::fs::write(dir.path().join("notes.md"), "ignored").unwrap();
        let c = load_jobs(dir.path()).unwrap();
        assert_eq!(c.jobs.len(), 1);
        assert_eq!(c.jobs[0].raw_text, "Lead a Java team at SAP.");
        assert_eq!(c.text_only, vec![JobText::new("JD10", "Write tests.")]);
        let ids: Vec<String> = c.texts().into_iter().map(|t| t.job_id).collect();
        assert_eq!(ids, ["JD2", "JD10"]);
        let (_, warnings) = c.structured("deterministic").unwrap();
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("a.json"), format!("[{JOB}, {JOB}]")).unwrap();
        let err = load_jobs(dir.path()).unwrap_err();
        assert!(err.to_string().contains("more than once"));
    }

    #[test]
    fn unknown_job_field_is_named() {
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("j.json");
        std::fs::write(&f, JOB.replace("\"organization\"", "\"organisation\"")).unwrap();
        let err = load_jobs(&f).unwrap_err();
        assert!(err.to_string().contains("organisation"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }
}
