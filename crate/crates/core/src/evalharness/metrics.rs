use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn non_empty(errors: &[f64]) -> Result<()> {
    if errors.is_empty() {
        Err(Error::Domain("no errors to summarise".into()))
    } else {
        Ok(())
    }
}

pub fn mae(errors: &[f64]) -> Result<f64> {
    non_empty(errors)?;
    Ok(errors.iter().map(|e| e.abs()).sum::<f64>() / errors.len() as f64)
}

pub fn rmse(errors: &[f64]) -> Result<f64> {
    non_empty(errors)?;
    Ok((errors.iter().map(|e| e * e).sum::<f64>() / errors.len() as f64).sqrt())
}

/// Running sum of absolute errors.
pub fn cumulative_abs_error(errors: &[f64]) -> Vec<f64> {
    errors
        .iter()
        .scan(0.0, |acc, e| {
            *acc += e.abs();
            Some(*acc)
        })
        .collect()
}

/// Accuracy over one stretch of out-of-sample errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mae: f64,
    pub rmse: f64,
    pub cumulative_abs: Vec<f64>,
}

impl Summary {
    pub fn from_errors(errors: &[f64]) -> Result<Self> {
        Ok(Self {
            mae: mae(errors)?,
            rmse: rmse(errors)?,
            cumulative_abs: cumulative_abs_error(errors),
        })
    }
}
