use serde::{Deserialize, Serialize};

use super::cv::CvReport;
use super::metrics::Summary;
use crate::error::{Error, Result};
use crate::numkit::median;

/// Fold-by-fold median of several models' point predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub name: String,
    pub members: Vec<String>,
    pub predictions: Vec<f64>,
    pub errors: Vec<f64>,
    pub summary: Summary,
}

pub fn median_ensemble(report: &CvReport, name: &str, members: &[String]) -> Result<EnsembleResult> {
    if members.is_empty() {
        return Err(Error::Config(format!("ensemble `{name}` has no members")));
    }
    let mut columns = Vec::with_capacity(members.len());
    for member in members {
        let model = report
            .model(member)
            .ok_or_else(|| Error::Config(format!("ensemble member `{member}` is not a model in the report")))?;
        let preds = model.predictions().ok_or_else(|| {
            Error::Domain(format!("ensemble member `{member}` has failed folds"))
        })?;
        columns.push(preds);
    }
    let k = report.actuals.len();
    let mut predictions = Vec::with_capacity(k);
    for fold in 0..k {
        let at_fold: Vec<f64> = columns.iter().map(|c| c[fold]).collect();
        predictions.push(median(&at_fold)?);
    }
    let errors: Vec<f64> = report
        .actuals
        .iter()
        .zip(&predictions)
        .map(|(a, p)| a - p)
        .collect();
    Ok(EnsembleResult {
        name: name.to_string(),
        members: members.to_vec(),
        summary: Summary::from_errors(&errors)?,
        predictions,
        errors,
    })
}

impl CvReport {
    /// Computes a median ensemble and appends it to the report.
    pub fn add_ensemble(&mut self, name: &str, members: &[String]) -> Result<&EnsembleResult> {
        if self.model(name).is_some() || self.ensembles.iter().any(|e| e.name == name) {
            return Err(Error::Config(format!("duplicate model name `{name}`")));
        }
        let ensemble = median_ensemble(self, name, members)?;
        self.ensembles.push(ensemble);
        Ok(self.ensembles.last().expect("just pushed"))
    }
}
