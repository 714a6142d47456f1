use thiserror::Error;

use crate::backend::BackendError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-side precondition did not hold.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Backend(#[from] BackendError),

    /// The backend answered but the answer could not be turned into a structured record.
    #[error("extraction failed: {reason}; response began with {:?}", head(.text))]
    Extraction { reason: String, text: String },

    #[error("could not parse model response: {reason}")]
    Parse { reason: String, text: String },

    #[error("model response references unknown job id `{0}`")]
    UnknownJobId(String),

    #[error("job `{job_id}` does not fit the token budget of {budget} even on its own ({needed} tokens)")]
    Oversize {
        job_id: String,
        needed: usize,
        budget: usize,
    },

    #[error("scoring failed: {0}")]
    Scoring(String),

    #[error("rating failed: {reason}")]
    Rating { reason: String, text: String },

    #[error("evaluation failed: {0}")]
    Evaluation(String),

    #[error("{stage} stage: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("subset {index}: {source}")]
    Subset {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn stage(stage: &'static str, source: Error) -> Self {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    pub(crate) fn subset(index: usize, source: Error) -> Self {
        Error::Subset {
            index,
            source: Box::new(source),
        }
    }

    /// True when the root cause is a backend failure rather than bad data.
    pub fn is_backend(&self) -> bool {
        match self {
            Error::Backend(_) => true,
            Error::Stage { source, .. } | Error::Subset { source, .. } => source.is_backend(),
            _ => false,
        }
    }
}

fn head(text: &str) -> String {
    text.chars().take(120).collect()
}
