//! Command-line front end for the `jobreco` library.
//!
//! [`run`] parses arguments, resolves configuration and dispatches to one
//! subcommand. Results go to the `out` writer, diagnostics to `err`. The
//! exit status is 0 on success, 1 for usage errors, 2 for bad data and 3
//! when the language-model backend fails or is not configured.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jobreco::domain::SourceMethod;

mod commands;
pub mod config;
pub mod error;
pub mod inputs;

pub use config::{load_config, Config, Overrides};
pub use error::{CliError, CliResult, EXIT_BACKEND, EXIT_DATA, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "jobreco", version, about = "Explainable job recommendations from CVs and job descriptions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON config file with `backend`, `match` and `limits` sections.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the resolved configuration with the API key redacted; to stdout
    /// when no subcommand is given, to stderr otherwise.
    #[arg(long, global = true)]
    pub show_config: bool,

    /// Concurrent backend calls.
    #[arg(long, global = true, value_name = "N")]
    pub parallelism: Option<usize>,

    /// Model context window in tokens.
    #[arg(long, global = true, value_name = "TOKENS")]
    pub budget: Option<usize>,

    /// Chat-completion endpoint URL.
    #[arg(long, global = true, value_name = "URL")]
    pub endpoint: Option<String>,

    #[arg(long, global = true)]
    pub model: Option<String>,

    #[arg(long, global = true, value_name = "SECONDS")]
    pub timeout_s: Option<u64>,

    #[arg(long, global = true, value_name = "N")]
    pub max_retries: Option<u32>,

    /// Replay canned responses from a JSON array of `{"match", "response"}` rules instead of calling a live model.
    #[arg(long, global = true, value_name = "FILE")]
    pub scripted: Option<PathBuf>,

    /// Write every prompt and response to this directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Deterministic,
    Guided,
    Unguided,
    Hybrid,
}

impl From<Mode> for SourceMethod {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Deterministic => SourceMethod::Deterministic,
            Mode::Guided => SourceMethod::Guided,
            Mode::Unguided => SourceMethod::Unguided,
            Mode::Hybrid => SourceMethod::Hybrid,
        }
    }
}

#[derive(Debug, Args)]
pub struct TalentArgs {
    /// CV text, or a structured talent profile when the file ends in `.json`.
    #[arg(long, value_name = "FILE")]
    pub talent: Option<PathBuf>,

    /// Structured talent profile (JSON).
    #[arg(long, value_name = "FILE")]
    pub structured_talent: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub talent: TalentArgs,

    /// Job catalog: a JSON file, a text file, or a directory of `.json` and `.txt` files.
    #[arg(long, value_name = "PATH")]
    pub jobs: PathBuf,

    /// Guided-mode criteria: plain text, or a JSON object with `criteria_text`, `top_n` and `output_format_instruction`.
    #[arg(long, value_name = "FILE")]
    pub criteria: Option<PathBuf>,

    /// Number of recommendations.
    #[arg(long, value_name = "N")]
    pub top: Option<usize>,

    /// Hybrid shortlist size.
    #[arg(long, value_name = "K", default_value_t = jobreco::hybrid::DEFAULT_SHORTLIST)]
    pub shortlist: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Turn CV or job description text files into `<name>.structured.json`.
    Extract {
        /// The files are job descriptions rather than CVs.
        #[arg(long)]
        job: bool,

        /// Also write a matching fictional CV for each job description to `<name>.cv.txt`.
        #[arg(long, requires = "job")]
        generate_cv: bool,

        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },

    /// Generate synthetic talents with graded job sets.
    Synth {
        /// Attribute catalog (JSON); the built-in IT catalog by default.
        #[arg(long, value_name = "FILE")]
        catalog: Option<PathBuf>,

        #[arg(long, value_name = "N")]
        cvs: usize,

        #[arg(long)]
        seed: u64,

        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },

    /// Recommend jobs for one talent.
    Recommend {
        #[arg(long, value_enum)]
        mode: Mode,

        #[command(flatten)]
        run: RunArgs,

        /// Print a table instead of JSON.
        #[arg(long)]
        pretty: bool,
    },

    /// Rate organizations and roles, for a catalog or for the jobs in a recommendations file.
    Rate {
        #[arg(long, value_name = "PATH")]
        jobs: PathBuf,

        /// Recommendations to annotate with ratings.
        #[arg(long, value_name = "FILE")]
        recs: Option<PathBuf>,
    },

    /// Compare recommendations against manual reference scores.
    Evaluate {
        /// Output of `recommend`, or an array of such objects. Repeatable.
        #[arg(long, required = true, value_name = "FILE")]
        recs: Vec<PathBuf>,

        /// Reference scores, `{talent_id: {job_id: score}}`.
        #[arg(long, value_name = "FILE")]
        refs: PathBuf,

        /// Score by rank position instead of the methods' own scores.
        #[arg(long)]
        ranked: bool,
    },

    /// Measure tokens and time per stage for one or more modes.
    Bench {
        /// Comma-separated modes.
        #[arg(long, value_enum, value_delimiter = ',', required = true)]
        mode: Vec<Mode>,

        #[command(flatten)]
        run: RunArgs,

        /// Print the measurements as JSON.
        #[arg(long)]
        json: bool,
    },
}

impl Command {
    fn top(&self) -> Option<usize> {
        match self {
            Command::Recommend { run, .. } | Command::Bench { run, .. } => run.top,
            _ => None,
        }
    }
}

/// Runs the command line in `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, env, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    let flags = Overrides {
        endpoint: g.endpoint.clone(),
        model: g.model.clone(),
        timeout_s: g.timeout_s,
        max_retries: g.max_retries,
        token_budget: g.budget,
        parallelism: g.parallelism,
        top_n: cli.command.as_ref().and_then(Command::top),
    };
    let config = load_config(g.config.as_deref(), env, &flags)?;
    let shown = inputs::to_json(&config);
    let Some(command) = cli.command else {
        if g.show_config {
            let _ = write!(out, "{shown}");
            return Ok(());
        }
        use clap::CommandFactory;
        let _ = write!(err, "{}", Cli::command().render_help());
        return Err(CliError::Usage("no subcommand given".into()));
    };
    if g.show_config {
        let _ = write!(err, "{shown}");
    }
    let ctx = commands::Context {
        config,
        scripted: g.scripted.clone(),
        transcript: g.transcript.clone(),
    };
    commands::execute(&ctx, command, out, err)
}
