use super::{column_means, ColumnScale, EstimatorKind, FittedModel};
use crate::error::{Error, Result};
use crate::numkit::{least_squares, mean, Matrix};

/// Ordinary least squares with an intercept.
///
/// Columns are centred before the QR solve, so a constant predictor shows up
/// as a singular column.
pub fn fit_ols(x: &Matrix, y: &[f64]) -> Result<FittedModel> {
    let (n, q) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if n <= q + 1 {
        return Err(Error::Domain(format!(
            "OLS with {q} predictors needs more than {} observations, got {n}",
            q + 1
        )));
    }
    let means = column_means(x);
    let y_mean = mean(y)?;
    let mut centred = x.clone();
    for i in 0..n {
        for (j, m) in means.iter().enumerate() {
            centred.set(i, j, x.get(i, j) - m);
        }
    }
    let yc: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    let beta = least_squares(&centred, &yc)?;
    let intercept = y_mean - beta.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    let scales = means
        .iter()
        .map(|&mean| ColumnScale { mean, scale: 1.0 })
        .collect();
    FittedModel::new(EstimatorKind::Ols, intercept, beta, scales, x)
}
