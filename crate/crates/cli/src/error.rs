use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_BACKEND: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    /// Bad input files, configuration or model output.
    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Core(#[from] jobreco::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) if e.is_backend() => EXIT_BACKEND,
            CliError::Core(_) | CliError::Data(_) | CliError::Io { .. } => EXIT_DATA,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use jobreco::backend::BackendError;

    #[test]
    fn codes_partition_failure_classes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
        assert_eq!(CliError::Data("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(jobreco::Error::UnknownJobId("JD99".into())).exit_code(), 2);
        let missing = jobreco::Error::Backend(BackendError::Missing("none".into()));
        assert_eq!(CliError::Core(missing).exit_code(), 3);
        let nested = jobreco::Error::Subset {
            index: 0,
            source: Box::new(jobreco::Error::Backend(BackendError::Transport("reset".into()))),
        };
        assert_eq!(CliError::Core(nested).exit_code(), 3);
    }
}
