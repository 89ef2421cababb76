use super::{ColumnScale, EstimatorKind, FittedModel};
use crate::error::{Error, Result};
use crate::numkit::{covariance, mean, variance, Matrix};

/// AR(1) benchmark: OLS of `y_t` on `(1, y_{t-1})`.
///
/// `y` is expected in differences already. A constant lag yields slope 0 and
/// the mean of the targets as intercept.
pub fn fit_ar1(y: &[f64]) -> Result<FittedModel> {
    if y.len() < 3 {
        return Err(Error::Domain(format!(
            "AR(1) needs at least 3 observations, got {}",
            y.len()
        )));
    }
    let lagged = &y[..y.len() - 1];
    let target = &y[1..];
    let lag_var = variance(lagged)?;
    let lag_mean = mean(lagged)?;
    let slope = if lag_var > 0.0 {
        covariance(lagged, target)? / lag_var
    } else {
        0.0
    };
    let intercept = mean(target)? - slope * lag_mean;
    let design = Matrix::new(lagged.len(), 1, lagged.to_vec())?;
    FittedModel::new(
        EstimatorKind::Ar1,
        intercept,
        vec![slope],
        vec![ColumnScale {
            mean: lag_mean,
            scale: 1.0,
        }],
        &design,
    )
}
