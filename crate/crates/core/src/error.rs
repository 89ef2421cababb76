use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures raised anywhere in the numerical stack.
///
/// Variants are grouped so callers (the CLI in particular) can map them onto
/// data, configuration and numerical failure classes via [`Error::class`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("log transform needs positive levels, found {value} at position {index}")]
    NonPositiveLevel { index: usize, value: f64 },

    #[error("design matrix is rank deficient at column {column}")]
    Singular { column: usize },

    #[error("coordinate descent did not converge after {sweeps} sweeps (last max change {last_delta:e})")]
    Convergence { sweeps: usize, last_delta: f64 },

    #[error("predictor `{column}` has zero variance")]
    ZeroVariance { column: String },

    #[error("series `{series}` is missing a value at {period}")]
    Gap { series: String, period: String },

    #[error("series `{series}` is not aligned with `{reference}`: {detail}")]
    Alignment {
        series: String,
        reference: String,
        detail: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Coarse failure class, used for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Config(_) => ErrorClass::Config,
            Error::Gap { .. } | Error::Alignment { .. } | Error::NonFinite { .. } => {
                ErrorClass::Data
            }
            Error::Domain(_)
            | Error::NonPositiveLevel { .. }
            | Error::LengthMismatch { .. }
            | Error::Singular { .. }
            | Error::Convergence { .. }
            | Error::ZeroVariance { .. } => ErrorClass::Numerical,
        }
    }
}
