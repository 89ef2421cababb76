//! Linear estimators behind one fit/predict contract.
//!
//! Every fit returns a [`FittedModel`] whose prediction is
//! `intercept + x · coefficients` in the original predictor units.

mod ar;
mod ols;
mod penalised;
mod pls;

pub use ar::fit_ar1;
pub use ols::fit_ols;
pub use penalised::{fit_penalised, PenalisedProblem, PenaltySpec, MAX_SWEEPS, SWEEP_TOLERANCE};
pub use pls::{fit_pls, fit_pls_with, pls_trace, PlsIntercept, PlsPayload, PlsStep};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{dot, Matrix};
use crate::tuning::SelectionRule;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    Ols,
    Penalised,
    Pls,
    Ar1,
}

/// Location and divisor applied to one predictor column at fit time.
///
/// Estimators that do not rescale record a unit divisor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnScale {
    pub mean: f64,
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuningRecord {
    pub lambda: f64,
    pub alpha: f64,
    /// How lambda was chosen; `None` when it was fixed by the caller.
    pub rule: Option<SelectionRule>,
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    pub kind: EstimatorKind,
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub standardization: Vec<ColumnScale>,
    pub tuning: Option<TuningRecord>,
    pub pls: Option<PlsPayload>,
    /// In-sample fitted values, computed through [`FittedModel::predict`].
    pub fitted: Vec<f64>,
}

impl FittedModel {
    pub(crate) fn new(
        kind: EstimatorKind,
        intercept: f64,
        coefficients: Vec<f64>,
        standardization: Vec<ColumnScale>,
        design: &Matrix,
    ) -> Result<Self> {
        let mut model = Self {
            kind,
            intercept,
            coefficients,
            standardization,
            tuning: None,
            pls: None,
            fitted: Vec::new(),
        };
        model.fitted = model.predict(design)?;
        Ok(model)
    }

    pub fn width(&self) -> usize {
        self.coefficients.len()
    }

    pub fn predict(&self, x_new: &Matrix) -> Result<Vec<f64>> {
        if x_new.ncols() != self.width() {
            return Err(Error::LengthMismatch {
                expected: self.width(),
                found: x_new.ncols(),
            });
        }
        Ok((0..x_new.nrows())
            .map(|i| self.intercept + dot(x_new.row(i), &self.coefficients))
            .collect())
    }

    pub fn predict_row(&self, row: &[f64]) -> Result<f64> {
        if row.len() != self.width() {
            return Err(Error::LengthMismatch {
                expected: self.width(),
                found: row.len(),
            });
        }
        Ok(self.intercept + dot(row, &self.coefficients))
    }

    /// One-step AR forecast from the latest observed response.
    pub fn predict_next(&self, last: f64) -> Result<f64> {
        if self.kind != EstimatorKind::Ar1 {
            return Err(Error::Domain("predict_next applies to AR models only".into()));
        }
        self.predict_row(&[last])
    }
}

/// Per-column means of a design.
pub(crate) fn column_means(x: &Matrix) -> Vec<f64> {
    let n = x.nrows() as f64;
    let mut means = vec![0.0; x.ncols()];
    for i in 0..x.nrows() {
        for (m, v) in means.iter_mut().zip(x.row(i)) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    means
}
