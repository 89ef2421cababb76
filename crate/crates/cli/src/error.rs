use std::path::PathBuf;

use gdpcast_core::ErrorClass;
use thiserror::Error;

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    /// I/O and anything unclassified.
    Other = 1,
    Config = 2,
    Data = 3,
    Numerical = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{path}: row {row}, column {column}: {message}")]
    Ingest {
        path: PathBuf,
        /// 1-based line number, header included.
        row: usize,
        /// 1-based.
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: gdpcast_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn stage(stage: &'static str) -> impl FnOnce(gdpcast_core::Error) -> Self {
        move |source| CliError::Stage { stage, source }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::Config,
            CliError::Ingest { .. } | CliError::Csv { .. } => ExitCode::Data,
            CliError::Stage { stage, source } => match source.class() {
                ErrorClass::Config => ExitCode::Config,
                // anything wrong while shaping the data is a data problem
                _ if *stage == "preprocess" => ExitCode::Data,
                ErrorClass::Data => ExitCode::Data,
                ErrorClass::Numerical => ExitCode::Numerical,
            },
            CliError::Io { .. } => ExitCode::Other,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
