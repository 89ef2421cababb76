//! Library side of the `gdpcast` command: configuration, CSV ingestion, the
//! end-to-end pipeline and report emission.

pub mod config;
pub mod error;
pub mod ingest;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use error::{CliError, ExitCode};
