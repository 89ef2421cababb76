//! Partial least squares by repeated marginal regression.
//!
//! Each direction regresses the current residual on every predictor
//! separately (`φ_i = cov(x_i, ε) / var(x_i)`), sums the predictors with
//! those loadings into a factor `z = x · φ`, and fits a forward regression of
//! the residual on `z` with slope `cov(z, ε) / var(z)`. One direction is the
//! marginal regression; later directions boost the fit on what is left.
//!
//! The loadings are ratios of covariances, so predictions do not depend on
//! predictor units and the predictors are used raw.

use serde::{Deserialize, Serialize};

use super::{column_means, ColumnScale, EstimatorKind, FittedModel};
use crate::error::{Error, Result};
use crate::numkit::{covariance, mean, std_dev, variance, Matrix};

/// Where the forward regressions' intercepts go.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlsIntercept {
    /// Every forward regression carries its own intercept, `-β_d z̄^d`.
    /// Predictions are invariant to predictor shifts and approach OLS as
    /// directions are added.
    #[default]
    PerDirection,
    /// Only the first direction is centred (`ŷ⁰ = ȳ - β₁ z̄¹`); later factors
    /// enter uncentred. Kept for comparison.
    FirstDirectionOnly,
}

/// Everything needed to rebuild the factors on new rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlsPayload {
    /// `φ^d`, one vector of length q per direction.
    pub loadings: Vec<Vec<f64>>,
    /// `β_d` per direction.
    pub slopes: Vec<f64>,
    /// Training mean of each factor.
    pub factor_means: Vec<f64>,
    pub response_mean: f64,
    pub requested: usize,
    pub intercept_mode: PlsIntercept,
}

impl PlsPayload {
    pub fn directions(&self) -> usize {
        self.slopes.len()
    }
}

/// State after one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PlsStep {
    pub loadings: Vec<f64>,
    pub factor: Vec<f64>,
    pub slope: f64,
    pub fitted: Vec<f64>,
    pub residual: Vec<f64>,
}

/// Loadings whose standardised norm falls below this fraction of sd(y) end
/// the recursion: the residual is already orthogonal to every predictor.
const EXHAUSTED: f64 = 1e-13;

/// Runs up to `d` directions, returning the state after each one.
///
/// Fewer steps come back when the residual becomes orthogonal to all
/// predictors (or `y` is constant).
pub fn pls_trace(x: &Matrix, y: &[f64], d: usize, mode: PlsIntercept) -> Result<Vec<PlsStep>> {
    let (n, q) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if d == 0 {
        return Err(Error::Domain("PLS needs at least one direction".into()));
    }
    if q == 0 {
        return Err(Error::Domain("PLS needs at least one predictor".into()));
    }
    if n < 2 {
        return Err(Error::Domain(format!("PLS needs at least 2 observations, got {n}")));
    }
    let columns = x.columns();
    let mut variances = Vec::with_capacity(q);
    for (j, col) in columns.iter().enumerate() {
        let v = variance(col)?;
        if !(v > 0.0) {
            return Err(Error::ZeroVariance {
                column: format!("#{j}"),
            });
        }
        variances.push(v);
    }
    let y_mean = mean(y)?;
    let y_sd = std_dev(y)?;

    let mut steps: Vec<PlsStep> = Vec::with_capacity(d);
    let mut residual = y.to_vec();
    let mut fitted = vec![0.0; n];
    for dir in 0..d {
        let mut loadings = Vec::with_capacity(q);
        for (col, var) in columns.iter().zip(&variances) {
            loadings.push(covariance(col, &residual)? / var);
        }
        let spread = loadings
            .iter()
            .zip(&variances)
            .map(|(l, v)| l * l * v)
            .sum::<f64>()
            .sqrt();
        if !(spread > EXHAUSTED * y_sd) {
            break;
        }
        let factor = x.mul_vec(&loadings)?;
        let factor_var = variance(&factor)?;
        if !(factor_var > 0.0) {
            break;
        }
        let slope = covariance(&factor, &residual)? / factor_var;
        let factor_mean = mean(&factor)?;
        let shift = if dir == 0 {
            y_mean - slope * factor_mean
        } else {
            match mode {
                PlsIntercept::PerDirection => -slope * factor_mean,
                PlsIntercept::FirstDirectionOnly => 0.0,
            }
        };
        for t in 0..n {
            fitted[t] += shift + slope * factor[t];
            residual[t] = y[t] - fitted[t];
        }
        steps.push(PlsStep {
            loadings,
            factor,
            slope,
            fitted: fitted.clone(),
            residual: residual.clone(),
        });
    }
    Ok(steps)
}

/// PLS with `d` directions and per-direction intercepts.
pub fn fit_pls(x: &Matrix, y: &[f64], d: usize) -> Result<FittedModel> {
    fit_pls_with(x, y, d, PlsIntercept::PerDirection)
}

/// PLS with `d` directions.
///
/// `d` may exceed the number of predictors; extra directions keep refining
/// the fit towards OLS.
pub fn fit_pls_with(x: &Matrix, y: &[f64], d: usize, mode: PlsIntercept) -> Result<FittedModel> {
    let steps = pls_trace(x, y, d, mode)?;
    let q = x.ncols();
    let y_mean = mean(y)?;
    let mut coefficients = vec![0.0; q];
    let mut intercept = y_mean;
    let mut factor_means = Vec::with_capacity(steps.len());
    for (dir, step) in steps.iter().enumerate() {
        for (c, l) in coefficients.iter_mut().zip(&step.loadings) {
            *c += step.slope * l;
        }
        let zbar = mean(&step.factor)?;
        if dir == 0 || mode == PlsIntercept::PerDirection {
            intercept -= step.slope * zbar;
        }
        factor_means.push(zbar);
    }
    let scales = column_means(x)
        .into_iter()
        .map(|mean| ColumnScale { mean, scale: 1.0 })
        .collect();
    let mut model = FittedModel::new(EstimatorKind::Pls, intercept, coefficients, scales, x)?;
    model.pls = Some(PlsPayload {
        loadings: steps.iter().map(|s| s.loadings.clone()).collect(),
        slopes: steps.iter().map(|s| s.slope).collect(),
        factor_means,
        response_mean: y_mean,
        requested: d,
        intercept_mode: mode,
    });
    Ok(model)
}

impl FittedModel {
    /// PLS prediction that rebuilds each factor from its stored loadings.
    pub fn predict_by_factors(&self, x_new: &Matrix) -> Result<Vec<f64>> {
        let payload = self
            .pls
            .as_ref()
            .ok_or_else(|| Error::Domain("model carries no PLS directions".into()))?;
        let mut out = vec![payload.response_mean; x_new.nrows()];
        for (dir, (phi, (slope, zbar))) in payload
            .loadings
            .iter()
            .zip(payload.slopes.iter().zip(&payload.factor_means))
            .enumerate()
        {
            let z = x_new.mul_vec(phi)?;
            let centre = if dir == 0 || payload.intercept_mode == PlsIntercept::PerDirection {
                *zbar
            } else {
                0.0
            };
            for (o, zt) in out.iter_mut().zip(&z) {
                *o += slope * (zt - centre);
            }
        }
        Ok(out)
    }
}
