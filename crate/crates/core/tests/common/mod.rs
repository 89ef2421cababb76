//! Reference implementations kept apart from the library code paths.
#![allow(dead_code)]

use gdpcast_core::evalharness::ModelSpec;
use gdpcast_core::evalharness::{LambdaChoice, ModelKind};
use gdpcast_core::models::{fit_ar1, fit_ols, fit_penalised, fit_pls, PenaltySpec};
use gdpcast_core::numkit::Matrix;
use gdpcast_core::tuning::select_lambda;

fn avg(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for x in v {
        s += x;
    }
    s / v.len() as f64
}

fn cov(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (avg(a), avg(b));
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - ma) * (b[i] - mb);
    }
    s / (a.len() as f64 - 1.0)
}

/// Line-by-line PLS: residual, marginal loadings, factor, forward
/// regression with its own intercept, fitted-value update.
pub fn oracle_pls(x: &Matrix, y: &[f64], d: usize) -> Vec<f64> {
    let n = y.len();
    let q = x.ncols();
    let cols: Vec<Vec<f64>> = (0..q).map(|i| (0..n).map(|t| x.get(t, i)).collect()).collect();
    let mut yhat = vec![0.0; n];
    for step in 1..=d {
        let eps: Vec<f64> = if step == 1 {
            y.to_vec()
        } else {
            (0..n).map(|t| y[t] - yhat[t]).collect()
        };
        let mut phi = vec![0.0; q];
        for i in 0..q {
            phi[i] = cov(&cols[i], &eps) / cov(&cols[i], &cols[i]);
        }
        let mut z = vec![0.0; n];
        for t in 0..n {
            for i in 0..q {
                z[t] += cols[i][t] * phi[i];
            }
        }
        let vz = cov(&z, &z);
        if vz <= 0.0 {
            break;
        }
        let beta = cov(&z, &eps) / vz;
        let alpha = avg(&eps) - beta * avg(&z);
        for t in 0..n {
            yhat[t] += alpha + beta * z[t];
        }
    }
    yhat
}

/// Plain rolling loop: refit on `[j, j + m)`, predict index `j + m`.
/// Returns per-fold predictions.
pub fn naive_rolling_predictions(x: &Matrix, y: &[f64], k: usize, spec: &ModelSpec) -> Vec<f64> {
    let n = y.len();
    let m = n - k;
    let mut out = Vec::new();
    for j in 0..k {
        let rows: Vec<Vec<f64>> = (j..j + m).map(|t| x.row(t).to_vec()).collect();
        let xw = Matrix::from_rows(&rows).unwrap();
        let xw = if x.ncols() == 0 { Matrix::zeros(m, 0) } else { xw };
        let yw: Vec<f64> = y[j..j + m].to_vec();
        let target = j + m;
        let p = match &spec.kind {
            ModelKind::Ar1 => {
                let fit = fit_ar1(&yw).unwrap();
                fit.intercept + fit.coefficients[0] * y[target - 1]
            }
            ModelKind::Ols => {
                let fit = fit_ols(&xw, &yw).unwrap();
                linear(fit.intercept, &fit.coefficients, x.row(target))
            }
            ModelKind::Pls { directions, .. } => {
                let fit = fit_pls(&xw, &yw, *directions).unwrap();
                linear(fit.intercept, &fit.coefficients, x.row(target))
            }
            ModelKind::Penalised { alpha, lambda } => {
                let l = match lambda {
                    LambdaChoice::Fixed { lambda } => *lambda,
                    LambdaChoice::Tuned { tuning, .. } => select_lambda(&xw, &yw, *alpha, tuning).unwrap().chosen(),
                };
                let fit = fit_penalised(&xw, &yw, &PenaltySpec { lambda: l, alpha: *alpha }).unwrap();
                linear(fit.intercept, &fit.coefficients, x.row(target))
            }
        };
        out.push(p);
    }
    out
}

fn linear(b0: f64, b: &[f64], row: &[f64]) -> f64 {
    let mut s = b0;
    for i in 0..b.len() {
        s += b[i] * row[i];
    }
    s
}

pub fn naive_mae(pred: &[f64], actual: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..pred.len() {
        s += (actual[i] - pred[i]).abs();
    }
    s / pred.len() as f64
}
