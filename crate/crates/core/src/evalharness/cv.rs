use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::folds::{Fold, FoldPlan};
use super::metrics::Summary;
use super::ensemble::EnsembleResult;
use crate::error::{Error, Result};
use crate::models::{fit_ar1, fit_ols, fit_pls_with, FittedModel, PenalisedProblem, PenaltySpec, PlsIntercept};
use crate::preprocess::{Period, SeriesFrame};
use crate::tuning::{fit_tuned, TuningConfig};

/// When a tuned penalty is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Retune {
    /// Re-select λ inside every training window.
    #[default]
    EveryFold,
    /// Select λ on the first window and reuse it.
    FirstFold,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum LambdaChoice {
    Fixed { lambda: f64 },
    Tuned {
        tuning: TuningConfig,
        retune: Retune,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ModelKind {
    Ar1,
    Ols,
    Penalised { alpha: f64, lambda: LambdaChoice },
    Pls { directions: usize, intercept: PlsIntercept },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub kind: ModelKind,
}

impl ModelSpec {
    pub fn new(name: impl Into<String>, kind: ModelKind) -> Self {
        Self {
            name: name.into(),
            kind,
        }
    }

    pub fn ar1() -> Self {
        Self::new("ar1", ModelKind::Ar1)
    }

    pub fn ols() -> Self {
        Self::new("ols", ModelKind::Ols)
    }

    pub fn pls(directions: usize) -> Self {
        Self::new(
            format!("pls{directions}"),
            ModelKind::Pls {
                directions,
                intercept: PlsIntercept::PerDirection,
            },
        )
    }

    /// Penalised model with λ re-tuned in every window.
    pub fn tuned(name: impl Into<String>, alpha: f64, tuning: TuningConfig) -> Self {
        Self::new(
            name,
            ModelKind::Penalised {
                alpha,
                lambda: LambdaChoice::Tuned {
                    tuning,
                    retune: Retune::EveryFold,
                },
            },
        )
    }

    pub fn ridge() -> Self {
        Self::tuned("ridge", 1.0, TuningConfig::default())
    }

    pub fn lasso() -> Self {
        Self::tuned("lasso", 0.0, TuningConfig::default())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum FoldOutcome {
    Ok {
        prediction: f64,
        /// actual - prediction
        error: f64,
        /// λ used, for penalised models.
        lambda: Option<f64>,
    },
    Failed { reason: String },
}

impl FoldOutcome {
    pub fn prediction(&self) -> Option<f64> {
        match self {
            FoldOutcome::Ok { prediction, .. } => Some(*prediction),
            FoldOutcome::Failed { .. } => None,
        }
    }

    pub fn error(&self) -> Option<f64> {
        match self {
            FoldOutcome::Ok { error, .. } => Some(*error),
            FoldOutcome::Failed { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelResult {
    pub name: String,
    pub spec: ModelKind,
    pub folds: Vec<FoldOutcome>,
    /// `None` when any fold failed.
    pub summary: Option<Summary>,
}

impl ModelResult {
    pub fn predictions(&self) -> Option<Vec<f64>> {
        self.folds.iter().map(FoldOutcome::prediction).collect()
    }

    pub fn errors(&self) -> Option<Vec<f64>> {
        self.folds.iter().map(FoldOutcome::error).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub plan: FoldPlan,
    pub test_periods: Vec<Period>,
    pub actuals: Vec<f64>,
    pub models: Vec<ModelResult>,
    pub ensembles: Vec<EnsembleResult>,
}

impl CvReport {
    pub fn model(&self, name: &str) -> Option<&ModelResult> {
        self.models.iter().find(|m| m.name == name)
    }
}

fn fit_window(
    kind: &ModelKind,
    x: &crate::numkit::Matrix,
    y: &[f64],
    fixed_lambda: Option<f64>,
) -> Result<FittedModel> {
    match kind {
        ModelKind::Ar1 => fit_ar1(y),
        ModelKind::Ols => fit_ols(x, y),
        ModelKind::Pls {
            directions,
            intercept,
        } => fit_pls_with(x, y, *directions, *intercept),
        ModelKind::Penalised { alpha, lambda } => match (lambda, fixed_lambda) {
            (_, Some(l)) | (&LambdaChoice::Fixed { lambda: l }, None) => {
                PenalisedProblem::new(x, y)?.fit(&PenaltySpec::new(l, *alpha)?)
            }
            (LambdaChoice::Tuned { tuning, .. }, None) => fit_tuned(x, y, *alpha, tuning).map(|(m, _)| m),
        },
    }
}

fn predict_fold(
    kind: &ModelKind,
    frame: &SeriesFrame,
    fold: &Fold,
    fixed_lambda: Option<f64>,
) -> Result<(f64, Option<f64>)> {
    let x = frame.predictors.row_range(fold.train_start, fold.train_end + 1);
    let y = &frame.response[fold.train_start..=fold.train_end];
    let model = fit_window(kind, &x, y, fixed_lambda)?;
    let prediction = match kind {
        ModelKind::Ar1 => model.predict_next(frame.response[fold.test_index - 1])?,
        _ => model.predict_row(frame.predictors.row(fold.test_index))?,
    };
    Ok((prediction, model.tuning.map(|t| t.lambda)))
}

fn evaluate_model(spec: &ModelSpec, frame: &SeriesFrame, plan: &FoldPlan) -> ModelResult {
    // λ fixed on the first window, when asked for
    let pinned: std::result::Result<Option<f64>, String> = match &spec.kind {
        ModelKind::Penalised {
            alpha,
            lambda:
                LambdaChoice::Tuned {
                    tuning,
                    retune: Retune::FirstFold,
                },
        } => {
            let f = &plan.folds[0];
            let x = frame.predictors.row_range(f.train_start, f.train_end + 1);
            fit_tuned(&x, &frame.response[f.train_start..=f.train_end], *alpha, tuning)
                .map(|(m, _)| m.tuning.map(|t| t.lambda))
                .map_err(|e| e.to_string())
        }
        _ => Ok(None),
    };

    let folds: Vec<FoldOutcome> = plan
        .folds
        .par_iter()
        .map(|fold| {
            let fixed = match &pinned {
                Ok(l) => *l,
                Err(reason) => {
                    return FoldOutcome::Failed {
                        reason: format!("tuning on the first window failed: {reason}"),
                    }
                }
            };
            match predict_fold(&spec.kind, frame, fold, fixed) {
                Ok((prediction, lambda)) => FoldOutcome::Ok {
                    prediction,
                    error: frame.response[fold.test_index] - prediction,
                    lambda,
                },
                Err(e) => FoldOutcome::Failed {
                    reason: e.to_string(),
                },
            }
        })
        .collect();

    let summary = folds
        .iter()
        .map(FoldOutcome::error)
        .collect::<Option<Vec<f64>>>()
        .and_then(|e| Summary::from_errors(&e).ok());
    ModelResult {
        name: spec.name.clone(),
        spec: spec.kind.clone(),
        folds,
        summary,
    }
}

/// Rolling-origin out-of-sample evaluation of every spec on `frame`.
///
/// Each fold refits on its training window and predicts the single test
/// quarter from that quarter's predictor row; the AR benchmark uses the
/// previous response instead. A failed fit is recorded on its fold and the
/// model then reports no summary. Folds may be evaluated in parallel on the
/// current rayon pool; results are assembled in fold order.
pub fn run_cv(frame: &SeriesFrame, specs: &[ModelSpec], plan: &FoldPlan) -> Result<CvReport> {
    if specs.is_empty() {
        return Err(Error::Config("no models to evaluate".into()));
    }
    if frame.len() != plan.n {
        return Err(Error::Config(format!(
            "fold plan covers {} observations but the frame has {}",
            plan.n,
            frame.len()
        )));
    }
    for (i, s) in specs.iter().enumerate() {
        if specs[..i].iter().any(|o| o.name == s.name) {
            return Err(Error::Config(format!("duplicate model name `{}`", s.name)));
        }
    }
    let models = specs
        .iter()
        .map(|spec| evaluate_model(spec, frame, plan))
        .collect();
    Ok(CvReport {
        test_periods: plan.folds.iter().map(|f| frame.periods[f.test_index]).collect(),
        actuals: plan.folds.iter().map(|f| frame.response[f.test_index]).collect(),
        plan: plan.clone(),
        models,
        ensembles: Vec::new(),
    })
}
