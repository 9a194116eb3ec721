use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside its allowed range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed file contents (bad PGM header, frame gap, size mismatch).
    #[error("format error: {0}")]
    Format(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    /// An invariant of the solver broke, e.g. the objective went up.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("tracking error: {0}")]
    Tracking(String),

    #[error("metric error: {0}")]
    Metric(String),

    /// A pipeline stage failed.
    #[error("{stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Config(_) => 2,
            Error::Io { .. } | Error::Format(_) => 3,
            Error::Numeric(_) | Error::Internal(_) | Error::Metric(_) => 4,
            Error::Tracking(_) => 5,
            Error::Stage { source, .. } => source.exit_code(),
        }
    }
}
