//! Choosing the penalty weight λ.
//!
//! Cross-validated rules run a past-only rolling evaluation inside the
//! caller's training window, the same scheme as the outer evaluation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evalharness::make_fold_plan;
use crate::models::{FittedModel, PenalisedProblem, PenaltySpec};
use crate::numkit::{mean, std_dev, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionRule {
    /// Smallest mean inner out-of-sample loss.
    CvMin,
    /// Largest λ within one standard error of the minimum.
    Cv1se,
    /// `n ln(RSS / n) + 2k`, k = nonzero slopes + 1.
    Aic,
}

/// Per-fold loss used by the cross-validated rules.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorMetric {
    /// Absolute error; scores are MAEs.
    #[default]
    Mae,
    /// Squared error; scores are MSEs, whose square roots are RMSEs.
    Rmse,
}

impl ErrorMetric {
    fn loss(self, e: f64) -> f64 {
        match self {
            ErrorMetric::Mae => e.abs(),
            ErrorMetric::Rmse => e * e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TuningConfig {
    pub rule: SelectionRule,
    pub inner_folds: usize,
    pub grid_count: usize,
    pub grid_ratio: f64,
    pub metric: ErrorMetric,
}

impl Default for TuningConfig {
    fn default() -> Self {
        Self {
            rule: SelectionRule::CvMin,
            inner_folds: 8,
            grid_count: 50,
            grid_ratio: 1e-3,
            metric: ErrorMetric::Mae,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaPath {
    /// Strictly decreasing.
    pub grid: Vec<f64>,
    /// Mean inner loss (CV rules) or AIC per grid point.
    pub scores: Vec<f64>,
    /// Standard error of the mean inner loss; zeros under AIC.
    pub std_errors: Vec<f64>,
    pub chosen_index: usize,
    pub rule: SelectionRule,
}

impl LambdaPath {
    pub fn chosen(&self) -> f64 {
        self.grid[self.chosen_index]
    }
}

/// Log-spaced grid from the LASSO all-zero threshold down to `ratio` times it.
pub fn lambda_grid(x: &Matrix, y: &[f64], count: usize, ratio: f64) -> Result<Vec<f64>> {
    if count < 2 {
        return Err(Error::Config(format!("lambda grid needs at least 2 points, got {count}")));
    }
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config(format!("lambda grid ratio must lie in (0, 1), got {ratio}")));
    }
    let lambda_max = PenalisedProblem::new(x, y)?.lambda_max();
    grid_from(lambda_max, count, ratio)
}

fn grid_from(lambda_max: f64, count: usize, ratio: f64) -> Result<Vec<f64>> {
    if !(lambda_max > 0.0) {
        return Err(Error::Domain(
            "response is uncorrelated with every predictor; no lambda grid".into(),
        ));
    }
    let last = (count - 1) as f64;
    Ok((0..count)
        .map(|i| lambda_max * ratio.powf(i as f64 / last))
        .collect())
}

/// Mean inner rolling-origin loss at one penalty, with its standard error.
pub fn inner_cv_error(
    x: &Matrix,
    y: &[f64],
    penalty: &PenaltySpec,
    inner_folds: usize,
    metric: ErrorMetric,
) -> Result<(f64, f64)> {
    let losses = inner_losses(x, y, std::slice::from_ref(&penalty.lambda), penalty.alpha, inner_folds, metric)?;
    summarise(&losses[0])
}

fn check_inner(n: usize, q: usize, inner_folds: usize) -> Result<()> {
    if inner_folds < 2 {
        return Err(Error::Config(format!(
            "inner cross-validation needs at least 2 folds, got {inner_folds}"
        )));
    }
    if n < inner_folds + q + 2 {
        return Err(Error::Config(format!(
            "{n} observations leave fewer than {} for inner training with {inner_folds} folds",
            q + 2
        )));
    }
    Ok(())
}

/// `losses[l][f]`: loss of grid point `l` on inner fold `f`.
fn inner_losses(
    x: &Matrix,
    y: &[f64],
    grid: &[f64],
    alpha: f64,
    inner_folds: usize,
    metric: ErrorMetric,
) -> Result<Vec<Vec<f64>>> {
    check_inner(x.nrows(), x.ncols(), inner_folds)?;
    let plan = make_fold_plan(x.nrows(), inner_folds)?;
    let mut losses = vec![Vec::with_capacity(inner_folds); grid.len()];
    for fold in &plan.folds {
        let train = x.row_range(fold.train_start, fold.train_end + 1);
        let problem = PenalisedProblem::new(&train, &y[fold.train_start..=fold.train_end])?;
        let row = x.row(fold.test_index);
        for (l, &lambda) in grid.iter().enumerate() {
            let model = problem.fit(&PenaltySpec::new(lambda, alpha)?)?;
            let e = y[fold.test_index] - model.predict_row(row)?;
            losses[l].push(metric.loss(e));
        }
    }
    Ok(losses)
}

fn summarise(losses: &[f64]) -> Result<(f64, f64)> {
    let m = mean(losses)?;
    let se = std_dev(losses)? / (losses.len() as f64).sqrt();
    Ok((m, se))
}

fn aic(model: &FittedModel, y: &[f64]) -> f64 {
    let n = y.len() as f64;
    let rss: f64 = y.iter().zip(&model.fitted).map(|(a, b)| (a - b).powi(2)).sum();
    let k = model.coefficients.iter().filter(|&&b| b != 0.0).count() + 1;
    n * (rss / n).ln() + 2.0 * k as f64
}

/// Scores every λ on the grid for `alpha` and applies `cfg.rule`.
pub fn select_lambda(x: &Matrix, y: &[f64], alpha: f64, cfg: &TuningConfig) -> Result<LambdaPath> {
    let grid = lambda_grid(x, y, cfg.grid_count, cfg.grid_ratio)?;
    select_on_grid(x, y, alpha, &grid, cfg)
}

/// As [`select_lambda`] on a caller-supplied strictly decreasing grid.
pub fn select_on_grid(
    x: &Matrix,
    y: &[f64],
    alpha: f64,
    grid: &[f64],
    cfg: &TuningConfig,
) -> Result<LambdaPath> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] > w[1])) || grid.iter().any(|l| !(*l >= 0.0)) {
        return Err(Error::Config("lambda grid must be non-empty, non-negative and strictly decreasing".into()));
    }
    PenaltySpec::new(grid[0], alpha)?;
    let (scores, std_errors) = match cfg.rule {
        SelectionRule::Aic => {
            let problem = PenalisedProblem::new(x, y)?;
            let mut scores = Vec::with_capacity(grid.len());
            for &lambda in grid {
                scores.push(aic(&problem.fit(&PenaltySpec::new(lambda, alpha)?)?, y));
            }
            (scores, vec![0.0; grid.len()])
        }
        SelectionRule::CvMin | SelectionRule::Cv1se => {
            let losses = inner_losses(x, y, grid, alpha, cfg.inner_folds, cfg.metric)?;
            let mut scores = Vec::with_capacity(grid.len());
            let mut ses = Vec::with_capacity(grid.len());
            for l in &losses {
                let (m, se) = summarise(l)?;
                scores.push(m);
                ses.push(se);
            }
            (scores, ses)
        }
    };
    if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
        return Err(Error::Domain(format!("non-finite tuning score at lambda {}", grid[i])));
    }
    let best = argmin(&scores);
    let chosen_index = match cfg.rule {
        SelectionRule::CvMin | SelectionRule::Aic => best,
        SelectionRule::Cv1se => {
            let bound = scores[best] + std_errors[best];
            scores
                .iter()
                .position(|&s| s <= bound)
                .expect("the minimiser satisfies its own bound")
        }
    };
    Ok(LambdaPath {
        grid: grid.to_vec(),
        scores,
        std_errors,
        chosen_index,
        rule: cfg.rule,
    })
}

/// First index of the minimum, i.e. the largest λ among ties.
fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in v.iter().enumerate() {
        if s < v[best] {
            best = i;
        }
    }
    best
}

/// Tunes λ on (x, y) and refits the whole window at the chosen value.
pub fn fit_tuned(
    x: &Matrix,
    y: &[f64],
    alpha: f64,
    cfg: &TuningConfig,
) -> Result<(FittedModel, LambdaPath)> {
    let path = select_lambda(x, y, alpha, cfg)?;
    let mut model = PenalisedProblem::new(x, y)?.fit(&PenaltySpec::new(path.chosen(), alpha)?)?;
    if let Some(t) = model.tuning.as_mut() {
        t.rule = Some(cfg.rule);
    }
    Ok((model, path))
}
