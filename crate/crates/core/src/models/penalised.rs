//! Penalised least squares:
//!
//! ```text
//! argmin  Σ_t (y_t - b0 - Σ_i x_it b_i)^2  +  λ Σ_i [ (1 - α)|b_i| + α b_i^2 ]
//! ```
//!
//! α = 1 is ridge and α = 0 is the LASSO; this is the reverse of the glmnet
//! convention. There are no 1/n or 1/2 factors, so λ values are not
//! interchangeable with other libraries.
//!
//! Predictors are standardised to zero mean and unit sample deviation before
//! the penalty is applied, and the intercept is never penalised. Reported
//! coefficients are mapped back to the original units.

use serde::{Deserialize, Serialize};

use super::{ColumnScale, EstimatorKind, FittedModel, TuningRecord};
use crate::error::{Error, Result};
use crate::numkit::{dot, least_squares, mean, Matrix};

/// Coordinate descent stops once no coefficient moves by more than this.
pub const SWEEP_TOLERANCE: f64 = 1e-8;
pub const MAX_SWEEPS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenaltySpec {
    pub lambda: f64,
    pub alpha: f64,
}

impl PenaltySpec {
    pub fn new(lambda: f64, alpha: f64) -> Result<Self> {
        let p = Self { lambda, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn ridge(lambda: f64) -> Self {
        Self { lambda, alpha: 1.0 }
    }

    pub fn lasso(lambda: f64) -> Self {
        Self { lambda, alpha: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config(format!("lambda must be finite and >= 0, got {}", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    fn l1(&self) -> f64 {
        self.lambda * (1.0 - self.alpha)
    }

    fn l2(&self) -> f64 {
        self.lambda * self.alpha
    }
}

/// A design standardised once and solved for many penalties.
#[derive(Debug, Clone)]
pub struct PenalisedProblem {
    design: Matrix,
    /// Standardised columns.
    columns: Vec<Vec<f64>>,
    scales: Vec<ColumnScale>,
    y_mean: f64,
    y_centred: Vec<f64>,
}

impl PenalisedProblem {
    pub fn new(x: &Matrix, y: &[f64]) -> Result<Self> {
        let n = x.nrows();
        if y.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: y.len(),
            });
        }
        if n < 2 {
            return Err(Error::Domain(format!(
                "penalised regression needs at least 2 observations, got {n}"
            )));
        }
        let mut columns = Vec::with_capacity(x.ncols());
        let mut scales = Vec::with_capacity(x.ncols());
        for (j, col) in x.columns().into_iter().enumerate() {
            let m = mean(&col)?;
            let ss: f64 = col.iter().map(|v| (v - m) * (v - m)).sum();
            let sd = (ss / (n - 1) as f64).sqrt();
            if !(sd > 0.0) {
                return Err(Error::ZeroVariance {
                    column: format!("#{j}"),
                });
            }
            columns.push(col.iter().map(|v| (v - m) / sd).collect());
            scales.push(ColumnScale { mean: m, scale: sd });
        }
        let y_mean = mean(y)?;
        Ok(Self {
            design: x.clone(),
            columns,
            scales,
            y_mean,
            y_centred: y.iter().map(|v| v - y_mean).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.y_centred.len()
    }

    pub fn q(&self) -> usize {
        self.columns.len()
    }

    pub fn standardized_columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn centred_response(&self) -> &[f64] {
        &self.y_centred
    }

    /// Smallest λ at which every LASSO slope is zero: `2 max_j |x̃_j · (y - ȳ)|`.
    pub fn lambda_max(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| 2.0 * dot(c, &self.y_centred).abs())
            .fold(0.0, f64::max)
    }

    /// Minimiser in standardised units, plus the number of sweeps used.
    pub fn solve_standardized(&self, p: &PenaltySpec) -> Result<(Vec<f64>, usize)> {
        self.solve_traced(p, |_| {})
    }

    /// As [`Self::solve_standardized`], calling `on_sweep` with the
    /// coefficients after every coordinate-descent sweep.
    pub fn solve_traced(
        &self,
        p: &PenaltySpec,
        on_sweep: impl FnMut(&[f64]),
    ) -> Result<(Vec<f64>, usize)> {
        p.validate()?;
        if self.q() == 0 {
            return Ok((Vec::new(), 0));
        }
        if p.l1() == 0.0 {
            return self.solve_ridge(p.l2()).map(|b| (b, 0));
        }
        self.coordinate_descent(p, on_sweep)
    }

    /// Closed form via QR of the augmented system `[X̃; √λ I] b ≈ [y; 0]`.
    fn solve_ridge(&self, l2: f64) -> Result<Vec<f64>> {
        let (n, q) = (self.n(), self.q());
        let root = l2.sqrt();
        let rows = if l2 > 0.0 { n + q } else { n };
        let mut aug = Matrix::zeros(rows, q);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                aug.set(i, j, v);
            }
            if l2 > 0.0 {
                aug.set(n + j, j, root);
            }
        }
        let mut rhs = self.y_centred.clone();
        rhs.resize(rows, 0.0);
        least_squares(&aug, &rhs)
    }

    fn coordinate_descent(
        &self,
        p: &PenaltySpec,
        mut on_sweep: impl FnMut(&[f64]),
    ) -> Result<(Vec<f64>, usize)> {
        let q = self.q();
        let ss = (self.n() - 1) as f64; // Σ x̃² for a standardised column
        let denom = 2.0 * ss + 2.0 * p.l2();
        let threshold = p.l1();
        let mut beta = vec![0.0; q];
        let mut resid = self.y_centred.clone();
        let mut last_delta = f64::INFINITY;
        for sweep in 1..=MAX_SWEEPS {
            let mut max_delta = 0.0_f64;
            for (j, col) in self.columns.iter().enumerate() {
                let rho = dot(col, &resid) + ss * beta[j];
                let updated = soft_threshold(2.0 * rho, threshold) / denom;
                let delta = updated - beta[j];
                if delta != 0.0 {
                    for (r, x) in resid.iter_mut().zip(col) {
                        *r -= delta * x;
                    }
                    beta[j] = updated;
                }
                max_delta = max_delta.max(delta.abs());
            }
            on_sweep(&beta);
            last_delta = max_delta;
            if max_delta < SWEEP_TOLERANCE {
                return Ok((beta, sweep));
            }
        }
        Err(Error::Convergence {
            sweeps: MAX_SWEEPS,
            last_delta,
        })
    }

    /// Fits and maps coefficients back to the original units.
    pub fn fit(&self, p: &PenaltySpec) -> Result<FittedModel> {
        let (std_beta, sweeps) = self.solve_standardized(p)?;
        let coefficients: Vec<f64> = std_beta
            .iter()
            .zip(&self.scales)
            .map(|(b, s)| b / s.scale)
            .collect();
        let intercept = self.y_mean
            - coefficients
                .iter()
                .zip(&self.scales)
                .map(|(b, s)| b * s.mean)
                .sum::<f64>();
        let mut model = FittedModel::new(
            EstimatorKind::Penalised,
            intercept,
            coefficients,
            self.scales.clone(),
            &self.design,
        )?;
        model.tuning = Some(TuningRecord {
            lambda: p.lambda,
            alpha: p.alpha,
            rule: None,
            sweeps,
        });
        Ok(model)
    }

    /// Literal objective in standardised units for centred data.
    pub fn objective_standardized(&self, beta: &[f64], p: &PenaltySpec) -> f64 {
        let mut rss = 0.0;
        for t in 0..self.n() {
            let fit: f64 = self.columns.iter().zip(beta).map(|(c, b)| c[t] * b).sum();
            rss += (self.y_centred[t] - fit).powi(2);
        }
        let penalty: f64 = beta
            .iter()
            .map(|b| (1.0 - p.alpha) * b.abs() + p.alpha * b * b)
            .sum();
        rss + p.lambda * penalty
    }
}

#[inline]
fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

pub fn fit_penalised(x: &Matrix, y: &[f64], p: &PenaltySpec) -> Result<FittedModel> {
    PenalisedProblem::new(x, y)?.fit(p)
}

impl FittedModel {
    /// Coefficients on the standardised scale the penalty was applied to.
    pub fn standardized_coefficients(&self) -> Vec<f64> {
        self.coefficients
            .iter()
            .zip(&self.standardization)
            .map(|(b, s)| b * s.scale)
            .collect()
    }
}
