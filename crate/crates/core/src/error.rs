use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical kernels and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("angle {0} rad outside the open interval (-pi/2, pi/2)")]
    AngleOutOfDomain(f64),

    #[error("estimation failed: {0}")]
    EstimationFailure(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Process exit code for the CLI: 1 configuration, 2 runtime, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) | Error::AngleOutOfDomain(_) => 1,
            Error::EstimationFailure(_) | Error::Numerical(_) => 2,
            Error::Io { .. } | Error::Csv { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
