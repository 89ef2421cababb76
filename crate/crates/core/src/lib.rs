//! Quarterly GDP nowcasting toolkit.
//!
//! * [`numkit`]: sample statistics and QR least squares.
//! * [`preprocess`]: level transforms, the Hampel outlier clamp and frame
//!   alignment.
//! * [`models`]: OLS, penalised regression, PLS and the AR(1) benchmark.
//! * [`tuning`]: λ selection by rolling cross-validation or AIC.
//! * [`evalharness`]: rolling-origin evaluation, accuracy metrics and
//!   median ensembles.
//! * [`synthgen`]: seeded factor-model scenarios for experiments and tests.

pub mod error;
pub mod evalharness;
pub mod models;
pub mod numkit;
pub mod preprocess;
pub mod synthgen;
pub mod tuning;

pub use error::{Error, ErrorClass, Result};
