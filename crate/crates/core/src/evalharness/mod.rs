//! Past-only rolling-origin evaluation.
//!
//! Each fold trains on a fixed-length window of consecutive quarters and
//! predicts the next one. Predictions use the test quarter's own predictor
//! row: this is a nowcast with a complete quarter of indicator data, not an
//! ex-ante forecast.

mod cv;
mod ensemble;
mod folds;
mod metrics;

pub use cv::{run_cv, CvReport, FoldOutcome, LambdaChoice, ModelKind, ModelResult, ModelSpec, Retune};
pub use ensemble::{median_ensemble, EnsembleResult};
pub use folds::{make_fold_plan, make_fold_plan_with, Fold, FoldPlan, WindowMode};
pub use metrics::{cumulative_abs_error, mae, rmse, Summary};
