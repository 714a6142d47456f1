//! Layered configuration: built-in defaults, then the config file, then
//! environment variables, then command-line flags.

use std::fmt;
use std::path::Path;
use std::time::Duration;

use jobreco::backend::{LiveConfig, DEFAULT_TOKEN_LIMIT};
use jobreco::domain::MatchConfig;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{CliError, CliResult};

pub const ENV_API_KEY: &str = "JOBRECO_API_KEY";
pub const ENV_ENDPOINT: &str = "JOBRECO_ENDPOINT";
pub const ENV_MODEL: &str = "JOBRECO_MODEL";
pub const ENV_TIMEOUT_S: &str = "JOBRECO_TIMEOUT_S";
pub const ENV_MAX_RETRIES: &str = "JOBRECO_MAX_RETRIES";
pub const ENV_TOKEN_BUDGET: &str = "JOBRECO_TOKEN_BUDGET";
pub const ENV_PARALLELISM: &str = "JOBRECO_PARALLELISM";

pub const DEFAULT_TIMEOUT_S: u64 = 120;
pub const DEFAULT_MAX_RETRIES: u32 = 3;
pub const DEFAULT_PARALLELISM: usize = 4;

/// A value that is never printed.
#[derive(Clone, PartialEq, Eq)]
pub struct Secret(String);

impl Secret {
    pub fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<redacted>")
    }
}

impl Serialize for Secret {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("<redacted>")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackendSettings {
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub timeout_s: u64,
    pub max_retries: u32,
    /// Read from the environment only.
    pub api_key: Option<Secret>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Limits {
    pub token_budget: usize,
    pub parallelism: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Config {
    pub backend: BackendSettings,
    #[serde(rename = "match")]
    pub matching: MatchConfig,
    pub limits: Limits,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            backend: BackendSettings {
                endpoint: None,
                model: None,
                timeout_s: DEFAULT_TIMEOUT_S,
                max_retries: DEFAULT_MAX_RETRIES,
                api_key: None,
            },
            matching: MatchConfig::default(),
            limits: Limits {
                token_budget: DEFAULT_TOKEN_LIMIT,
                parallelism: DEFAULT_PARALLELISM,
            },
        }
    }
}

impl Config {
    /// Settings for the HTTP backend, or why they are incomplete.
    pub fn live(&self) -> Result<LiveConfig, String> {
        let b = &self.backend;
        let mut missing = Vec::new();
        if b.endpoint.is_none() {
            missing.push(format!("backend.endpoint (or {ENV_ENDPOINT})"));
        }
        if b.model.is_none() {
            missing.push(format!("backend.model (or {ENV_MODEL})"));
        }
        if b.api_key.is_none() {
            missing.push(ENV_API_KEY.to_string());
        }
        if !missing.is_empty() {
            return Err(format!("set {}, or pass --scripted <rules.json>", missing.join(", ")));
        }
        let mut live = LiveConfig::new(
            b.endpoint.clone().unwrap_or_default(),
            b.api_key.as_ref().map(|k| k.expose().to_string()).unwrap_or_default(),
            b.model.clone().unwrap_or_default(),
        );
        live.timeout = Duration::from_secs(b.timeout_s);
        live.max_retries = b.max_retries;
        Ok(live)
    }

    /// True when any backend setting was given, complete or not.
    pub fn backend_requested(&self) -> bool {
        self.backend.endpoint.is_some() || self.backend.model.is_some()
    }
}

/// Values given on the command line; `None` leaves the lower layers alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub timeout_s: Option<u64>,
    pub max_retries: Option<u32>,
    pub token_budget: Option<usize>,
    pub parallelism: Option<usize>,
    pub top_n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    backend: BackendFile,
    #[serde(rename = "match")]
    matching: Option<MatchConfig>,
    limits: LimitsFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BackendFile {
    endpoint: Option<String>,
    model: Option<String>,
    timeout_s: Option<u64>,
    max_retries: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LimitsFile {
    token_budget: Option<usize>,
    parallelism: Option<usize>,
}

fn env_num<T: std::str::FromStr>(env: &dyn Fn(&str) -> Option<String>, var: &str) -> CliResult<Option<T>> {
    match env(var) {
        None => Ok(None),
        Some(v) if v.trim().is_empty() => Ok(None),
        Some(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Data(format!("{var}: expected a whole number, got `{v}`"))),
    }
}

fn env_str(env: &dyn Fn(&str) -> Option<String>, var: &str) -> Option<String> {
    env(var).filter(|v| !v.trim().is_empty())
}

/// Resolves the configuration. `env` looks up environment variables so
/// callers can substitute a fixed map.
pub fn load_config(path: Option<&Path>, env: &dyn Fn(&str) -> Option<String>, flags: &Overrides) -> CliResult<Config> {
    let mut cfg = Config::default();

    if let Some(path) = path {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let file: FileConfig = if text.trim().is_empty() {
            FileConfig::default()
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?
        };
        let b = file.backend;
        cfg.backend.endpoint = b.endpoint.or(cfg.backend.endpoint);
        cfg.backend.model = b.model.or(cfg.backend.model);
        cfg.backend.timeout_s = b.timeout_s.unwrap_or(cfg.backend.timeout_s);
        cfg.backend.max_retries = b.max_retries.unwrap_or(cfg.backend.max_retries);
        if let Some(m) = file.matching {
            cfg.matching = m;
        }
        cfg.limits.token_budget = file.limits.token_budget.unwrap_or(cfg.limits.token_budget);
        cfg.limits.parallelism = file.limits.parallelism.unwrap_or(cfg.limits.parallelism);
    }

    cfg.backend.api_key = env_str(env, ENV_API_KEY).map(Secret);
    if let Some(v) = env_str(env, ENV_ENDPOINT) {
        cfg.backend.endpoint = Some(v);
    }
    if let Some(v) = env_str(env, ENV_MODEL) {
        cfg.backend.model = Some(v);
    }
    if let Some(v) = env_num(env, ENV_TIMEOUT_S)? {
        cfg.backend.timeout_s = v;
    }
    if let Some(v) = env_num(env, ENV_MAX_RETRIES)? {
        cfg.backend.max_retries = v;
    }
    if let Some(v) = env_num(env, ENV_TOKEN_BUDGET)? {
        cfg.limits.token_budget = v;
    }
    if let Some(v) = env_num(env, ENV_PARALLELISM)? {
        cfg.limits.parallelism = v;
    }

    if let Some(v) = &flags.endpoint {
        cfg.backend.endpoint = Some(v.clone());
    }
    if let Some(v) = &flags.model {
        cfg.backend.model = Some(v.clone());
    }
    cfg.backend.timeout_s = flags.timeout_s.unwrap_or(cfg.backend.timeout_s);
    cfg.backend.max_retries = flags.max_retries.unwrap_or(cfg.backend.max_retries);
    cfg.limits.token_budget = flags.token_budget.unwrap_or(cfg.limits.token_budget);
    cfg.limits.parallelism = flags.parallelism.unwrap_or(cfg.limits.parallelism);
    cfg.matching.top_n = flags.top_n.unwrap_or(cfg.matching.top_n);

    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &Config) -> CliResult<()> {
    let mut problems: Vec<String> = cfg.matching.validate().iter().map(|v| format!("match.{v}")).collect();
    if cfg.limits.token_budget == 0 {
        problems.push("limits.token_budget must be at least 1".into());
    }
    if cfg.limits.parallelism == 0 {
        problems.push("limits.parallelism must be at least 1".into());
    }
    if cfg.backend.timeout_s == 0 {
        problems.push("backend.timeout_s must be at least 1".into());
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(CliError::Data(format!("invalid configuration: {}", problems.join("; "))))
    }
}
