//! Seeded single-factor scenarios with optional regime breaks, plus the
//! literal penalised objective used to certify fitted coefficients.
//!
//! Randomness comes from ChaCha8 seeded through `seed_from_u64`, with normal
//! draws from `rand_distr::StandardNormal`; both are portable, so a given
//! spec produces the same frame on every platform.
//!
//! Model: `f_t = ρ f_{t-1} + u_t`, `x_it = l_i f_t + e_it`, `y_t = f_t + v_t`.
//! Draw order per quarter is `u_t`, `v_t`, then `e_1t .. e_qt`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::PenaltySpec;
use crate::numkit::{dot, Matrix};
use crate::preprocess::{Period, SeriesFrame};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakKind {
    /// Adds `shock_size` to the response and every predictor for
    /// `shock_len` quarters.
    #[default]
    LevelShock,
    /// Negates the loadings of every second predictor (indices 1, 3, ...)
    /// from the break onwards.
    LoadingFlip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioSpec {
    pub n: usize,
    pub q: usize,
    pub factor_loadings: Vec<f64>,
    /// AR(1) coefficient of the latent factor.
    pub factor_ar: f64,
    pub noise_sd: f64,
    pub idiosyncratic_sd: f64,
    /// First 0-based index of the new regime.
    pub break_at: Option<usize>,
    pub break_kind: BreakKind,
    pub shock_size: f64,
    pub shock_len: usize,
    pub start: Period,
    pub seed: u64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            n: 95,
            q: 14,
            factor_loadings: vec![1.0; 14],
            factor_ar: 0.5,
            noise_sd: 0.5,
            idiosyncratic_sd: 1.0,
            break_at: None,
            break_kind: BreakKind::LevelShock,
            shock_size: 5.0,
            shock_len: 4,
            start: Period::new(2000, 2).expect("valid quarter"),
            seed: 0,
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n < 2 {
            return bad(format!("scenario needs n >= 2, got {}", self.n));
        }
        if self.factor_loadings.len() != self.q {
            return bad(format!(
                "{} loadings given for {} predictors",
                self.factor_loadings.len(),
                self.q
            ));
        }
        if !(self.noise_sd > 0.0 && self.idiosyncratic_sd > 0.0) {
            return bad("noise standard deviations must be positive".into());
        }
        if !(self.factor_ar.abs() < 1.0) {
            return bad(format!("factor AR coefficient {} is not stationary", self.factor_ar));
        }
        if let Some(b) = self.break_at {
            if b == 0 || b > self.n {
                return bad(format!("break index {b} outside 1..={}", self.n));
            }
        }
        let finite = self.factor_loadings.iter().all(|v| v.is_finite()) && self.shock_size.is_finite();
        if !finite {
            return bad("loadings and shock size must be finite".into());
        }
        Ok(())
    }

    pub fn predictor_names(&self) -> Vec<String> {
        (1..=self.q).map(|i| format!("x{i:02}")).collect()
    }
}

/// Draws the scenario; identical specs give identical frames.
pub fn generate(spec: &ScenarioSpec) -> Result<SeriesFrame> {
    spec.validate()?;
    let (n, q) = (spec.n, spec.q);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };

    let mut y = Vec::with_capacity(n);
    let mut x = Matrix::zeros(n, q);
    let mut factor = 0.0;
    for t in 0..n {
        let u = draw();
        factor = if t == 0 {
            u / (1.0 - spec.factor_ar * spec.factor_ar).sqrt()
        } else {
            spec.factor_ar * factor + u
        };
        let after_break = spec.break_at.is_some_and(|b| t >= b);
        let shock = match (spec.break_kind, spec.break_at) {
            (BreakKind::LevelShock, Some(b)) if t >= b && t < b + spec.shock_len => spec.shock_size,
            _ => 0.0,
        };
        y.push(factor + spec.noise_sd * draw() + shock);
        for (i, &loading) in spec.factor_loadings.iter().enumerate() {
            let flipped = spec.break_kind == BreakKind::LoadingFlip && after_break && i % 2 == 1;
            let l = if flipped { -loading } else { loading };
            x.set(t, i, l * factor + spec.idiosyncratic_sd * draw() + shock);
        }
    }
    SeriesFrame::new(spec.start.range(n), "y", y, spec.predictor_names(), x)
}

/// Literal penalised least-squares objective:
/// `Σ_t (y_t - b0 - Σ_i x_it b_i)^2 + λ Σ_i [(1 - α)|b_i| + α b_i^2]`.
pub fn oracle_objective(
    x: &Matrix,
    y: &[f64],
    beta: &[f64],
    intercept: f64,
    p: &PenaltySpec,
) -> Result<f64> {
    if y.len() != x.nrows() {
        return Err(Error::LengthMismatch {
            expected: x.nrows(),
            found: y.len(),
        });
    }
    if beta.len() != x.ncols() {
        return Err(Error::LengthMismatch {
            expected: x.ncols(),
            found: beta.len(),
        });
    }
    let mut rss = 0.0;
    for (t, yt) in y.iter().enumerate() {
        let r = yt - intercept - dot(x.row(t), beta);
        rss += r * r;
    }
    let mut penalty = 0.0;
    for b in beta {
        penalty += (1.0 - p.alpha) * b.abs() + p.alpha * b * b;
    }
    Ok(rss + p.lambda * penalty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fit_ols;
    use crate::numkit::mean;

    #[test]
    fn vanishing_noise_makes_predictors_equal_response() {
        let spec = ScenarioSpec {
            q: 4,
            factor_loadings: vec![1.0; 4],
            noise_sd: 1e-300,
            idiosyncratic_sd: 1e-300,
            ..ScenarioSpec::default()
        };
        let frame = generate(&spec).unwrap();
        for j in 0..4 {
            assert_eq!(frame.predictors.column(j), frame.response);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = ScenarioSpec { seed: 42, ..ScenarioSpec::default() };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = ScenarioSpec { seed: 43, ..ScenarioSpec::default() };
        assert_ne!(generate(&spec).unwrap().response, generate(&other).unwrap().response);
    }

    #[test]
    fn level_shock_raises_post_break_magnitude() {
        let spec = ScenarioSpec {
            break_at: Some(81),
            shock_size: 5.0,
            seed: 7,
            ..ScenarioSpec::default()
        };
        let frame = generate(&spec).unwrap();
        let abs: Vec<f64> = frame.response.iter().map(|v| v.abs()).collect();
        let before = mean(&abs[..81]).unwrap();
        let after = mean(&abs[81..]).unwrap();
        assert!(after > before, "{after} <= {before}");
        assert_eq!(frame.len(), 95);
        assert_eq!(frame.periods[0].to_string(), "2000Q2");
    }

    #[test]
    fn loading_flip_reverses_alternate_predictors() {
        let spec = ScenarioSpec {
            q: 2,
            factor_loadings: vec![1.0, 1.0],
            noise_sd: 1e-300,
            idiosyncratic_sd: 1e-300,
            break_at: Some(5),
            break_kind: BreakKind::LoadingFlip,
            ..ScenarioSpec::default()
        };
        let frame = generate(&spec).unwrap();
        for t in 0..spec.n {
            assert_eq!(frame.predictors.get(t, 0), frame.response[t]);
            let sign = if t >= 5 { -1.0 } else { 1.0 };
            assert_eq!(frame.predictors.get(t, 1), sign * frame.response[t]);
        }
    }

    #[test]
    fn invalid_specs() {
        let base = ScenarioSpec::default();
        for spec in [
            ScenarioSpec { noise_sd: 0.0, ..base.clone() },
            ScenarioSpec { q: 3, ..base.clone() },
            ScenarioSpec { break_at: Some(0), ..base.clone() },
            ScenarioSpec { break_at: Some(96), ..base.clone() },
            ScenarioSpec { factor_ar: 1.0, ..base.clone() },
        ] {
            assert!(generate(&spec).is_err());
        }
    }

    #[test]
    fn objective_identities() {
        let frame = generate(&ScenarioSpec { q: 3, factor_loadings: vec![1.0, 0.5, -1.0], seed: 3, ..ScenarioSpec::default() }).unwrap();
        let y = &frame.response;
        let ybar = mean(y).unwrap();
        let tss: f64 = y.iter().map(|v| (v - ybar).powi(2)).sum();
        let p = PenaltySpec { lambda: 3.0, alpha: 0.5 };
        let at_zero = oracle_objective(&frame.predictors, y, &[0.0; 3], ybar, &p).unwrap();
        assert!((at_zero - tss).abs() <= 1e-12 * tss);

        let ols = fit_ols(&frame.predictors, y).unwrap();
        let rss: f64 = y.iter().zip(&ols.fitted).map(|(a, b)| (a - b).powi(2)).sum();
        let obj = oracle_objective(&frame.predictors, y, &ols.coefficients, ols.intercept, &PenaltySpec::ridge(0.0)).unwrap();
        assert!((obj - rss).abs() <= 1e-12 * rss);
        assert!(oracle_objective(&frame.predictors, y, &[0.0; 2], 0.0, &p).is_err());
    }
}
