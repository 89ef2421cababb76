use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{mad, median};

/// Sliding-window outlier clamp settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HampelConfig {
    /// Centred window length in quarters; odd, at least 3.
    pub window: usize,
    /// Half-width of the acceptance band in MADs.
    pub n_mad: f64,
}

impl Default for HampelConfig {
    fn default() -> Self {
        Self {
            window: 19,
            n_mad: 2.5,
        }
    }
}

impl HampelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::Config(format!(
                "hampel window must be odd and >= 3, got {}",
                self.window
            )));
        }
        if !(self.n_mad > 0.0) {
            return Err(Error::Config(format!(
                "hampel n_mad must be positive, got {}",
                self.n_mad
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub values: Vec<f64>,
    /// `true` where the input was clamped.
    pub flags: Vec<bool>,
}

impl Filtered {
    pub fn flagged_indices(&self) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect()
    }
}

/// Clamps each point to `median ± n_mad * MAD` of its centred window.
///
/// Windows are truncated at the series ends. Points are clamped to the nearest
/// band edge, so a zero-MAD window pulls any deviating point onto the median.
/// Series shorter than 3 points are returned untouched.
pub fn hampel_filter(v: &[f64], cfg: &HampelConfig) -> Result<Filtered> {
    cfg.validate()?;
    let n = v.len();
    let mut values = v.to_vec();
    let mut flags = vec![false; n];
    if n < 3 {
        return Ok(Filtered { values, flags });
    }
    let half = cfg.window / 2;
    for t in 0..n {
        let lo = t.saturating_sub(half);
        let hi = (t + half + 1).min(n);
        let window = &v[lo..hi];
        let m = median(window)?;
        let band = cfg.n_mad * mad(window)?;
        let dev = v[t] - m;
        // An infinite multiplier on a zero MAD yields NaN; the comparison is
        // then false and the point is kept.
        if dev.abs() > band {
            values[t] = if band == 0.0 { m } else { m + band.copysign(dev) };
            flags[t] = true;
        }
    }
    Ok(Filtered { values, flags })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spike_series() -> Vec<f64> {
        let mut v = vec![1.0; 19];
        v[9] = 100.0;
        v
    }

    #[test]
    fn spike_on_constant_clamps_to_median() {
        let out = hampel_filter(&spike_series(), &HampelConfig::default()).unwrap();
        assert_eq!(out.values, vec![1.0; 19]);
        assert_eq!(out.flagged_indices(), vec![9]);
    }

    #[test]
    fn second_pass_is_a_no_op() {
        let cfg = HampelConfig::default();
        let once = hampel_filter(&spike_series(), &cfg).unwrap();
        let twice = hampel_filter(&once.values, &cfg).unwrap();
        assert_eq!(once.values, twice.values);
        assert!(twice.flags.iter().all(|f| !f));
    }

    /// Window-by-window check written without the filter's code path.
    fn brute_force_flags(v: &[f64], window: usize, n_mad: f64) -> Vec<bool> {
        let half = window / 2;
        (0..v.len())
            .map(|t| {
                let mut w: Vec<f64> = Vec::new();
                for (i, &x) in v.iter().enumerate() {
                    if i + half >= t && i <= t + half {
                        w.push(x);
                    }
                }
                w.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mid = |s: &[f64]| {
                    let k = s.len();
                    if k % 2 == 1 { s[k / 2] } else { (s[k / 2 - 1] + s[k / 2]) / 2.0 }
                };
                let m = mid(&w);
                let mut dev: Vec<f64> = w.iter().map(|x| (x - m).abs()).collect();
                dev.sort_by(|a, b| a.partial_cmp(b).unwrap());
                (v[t] - m).abs() > n_mad * mid(&dev)
            })
            .collect()
    }

    #[test]
    fn linear_ramp_passes_untouched() {
        let ramp: Vec<f64> = (1..=25).map(f64::from).collect();
        assert!(brute_force_flags(&ramp, 19, 2.5).iter().all(|f| !f));
        let out = hampel_filter(&ramp, &HampelConfig::default()).unwrap();
        assert_eq!(out.values, ramp);
        assert!(out.flags.iter().all(|f| !f));
    }

    #[test]
    fn infinite_band_changes_nothing() {
        let cfg = HampelConfig {
            window: 5,
            n_mad: f64::INFINITY,
        };
        let v = spike_series();
        let out = hampel_filter(&v, &cfg).unwrap();
        assert_eq!(out.values, v);
    }

    #[test]
    fn clamps_to_band_edge_preserving_sign() {
        let v = [0.0, 1.0, 2.0, 3.0, -40.0, 5.0, 6.0, 7.0, 8.0];
        let cfg = HampelConfig { window: 5, n_mad: 2.5 };
        let out = hampel_filter(&v, &cfg).unwrap();
        // window [2, 3, -40, 5, 6]: median 3, MAD 2, band 5
        assert!(out.flags[4]);
        assert_eq!(out.values[4], -2.0);
        assert_eq!(out.flagged_indices(), vec![4]);
        assert_eq!(brute_force_flags(&v, 5, 2.5), out.flags);
    }

    #[test]
    fn short_series_pass_through() {
        let out = hampel_filter(&[1.0, 50.0], &HampelConfig::default()).unwrap();
        assert_eq!(out.values, vec![1.0, 50.0]);
        assert_eq!(out.flags, vec![false, false]);
        assert!(hampel_filter(&[], &HampelConfig::default()).unwrap().values.is_empty());
    }

    #[test]
    fn rejects_bad_config() {
        for cfg in [
            HampelConfig { window: 4, n_mad: 2.5 },
            HampelConfig { window: 1, n_mad: 2.5 },
            HampelConfig { window: 5, n_mad: 0.0 },
            HampelConfig { window: 5, n_mad: f64::NAN },
        ] {
            assert!(hampel_filter(&[1.0, 2.0, 3.0], &cfg).is_err());
        }
    }

    #[test]
    fn unflagged_points_are_bit_identical_and_clamped_stay_in_band() {
        let v: Vec<f64> = (0..60)
            .map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.3 + if i % 17 == 3 { 25.0 } else { 0.0 })
            .collect();
        let cfg = HampelConfig { window: 9, n_mad: 2.5 };
        let out = hampel_filter(&v, &cfg).unwrap();
        assert_eq!(out.flags, brute_force_flags(&v, 9, 2.5));
        for t in 0..v.len() {
            if out.flags[t] {
                let lo = t.saturating_sub(4);
                let hi = (t + 5).min(v.len());
                let m = median(&v[lo..hi]).unwrap();
                let band = 2.5 * mad(&v[lo..hi]).unwrap();
                assert!((out.values[t] - m).abs() <= band * (1.0 + 1e-15));
            } else {
                assert_eq!(out.values[t].to_bits(), v[t].to_bits());
            }
        }
    }
}
