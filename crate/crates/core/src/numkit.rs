//! Dense statistical primitives shared by every estimator.
//!
//! Variance and covariance use the sample (n - 1) divisor throughout. PLS
//! loadings and slopes are ratios of these quantities, so the divisor cancels
//! there; it only has to be consistent.
//!
//! All reductions run sequentially in index order so results are bit-stable.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative pivot tolerance below which a QR diagonal entry is treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Dense row-major matrix of finite values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds an `n x columns.len()` matrix; every column must have length `n`.
    pub fn from_columns(n: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let cols = columns.len();
        let mut data = vec![0.0; n * cols];
        for (j, column) in columns.iter().enumerate() {
            if column.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: column.len(),
                });
            }
            for (i, &v) in column.iter().enumerate() {
                data[i * cols + j] = v;
            }
        }
        Self::new(n, cols, data)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, col)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Copy of rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> Matrix {
        Matrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// `self * v`.
    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn require_len(v: &[f64], min: usize) -> Result<()> {
    if v.len() < min {
        Err(Error::Domain(format!(
            "need at least {min} values, got {}",
            v.len()
        )))
    } else {
        Ok(())
    }
}

pub fn mean(v: &[f64]) -> Result<f64> {
    require_len(v, 1)?;
    Ok(v.iter().sum::<f64>() / v.len() as f64)
}

/// Sample variance (n - 1 divisor).
pub fn variance(v: &[f64]) -> Result<f64> {
    covariance(v, v)
}

/// Sample covariance (n - 1 divisor), computed in two passes around the means.
pub fn covariance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    require_len(a, 2)?;
    let ma = mean(a)?;
    let mb = mean(b)?;
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    Ok(s / (a.len() - 1) as f64)
}

pub fn std_dev(v: &[f64]) -> Result<f64> {
    variance(v).map(f64::sqrt)
}

/// Median; even lengths average the two central order statistics.
pub fn median(v: &[f64]) -> Result<f64> {
    require_len(v, 1)?;
    let mut sorted = v.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    Ok(if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    })
}

/// Median absolute deviation from the median, without a consistency constant.
pub fn mad(v: &[f64]) -> Result<f64> {
    let m = median(v)?;
    let deviations: Vec<f64> = v.iter().map(|x| (x - m).abs()).collect();
    median(&deviations)
}

/// Least-squares solution of `x * beta ≈ y` via Householder QR.
///
/// Fails with [`Error::Singular`] when a diagonal entry of R falls below
/// [`PIVOT_TOLERANCE`] relative to the largest column norm of `x`.
pub fn least_squares(x: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let (n, q) = (x.nrows(), x.ncols());
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: y.len(),
        });
    }
    if n < q {
        return Err(Error::Domain(format!(
            "least squares needs at least as many rows ({n}) as columns ({q})"
        )));
    }
    if q == 0 {
        return Ok(Vec::new());
    }

    // Column-major working copy; Householder reflections are applied in place.
    let mut a: Vec<Vec<f64>> = x.columns();
    let mut rhs = y.to_vec();
    let scale = a
        .iter()
        .map(|c| dot(c, c).sqrt())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return Err(Error::Singular { column: 0 });
    }

    for k in 0..q {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= PIVOT_TOLERANCE * scale {
            return Err(Error::Singular { column: k });
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2 = dot(&v, &v);
        if vnorm2 > 0.0 {
            for col in a.iter_mut().skip(k) {
                let f = 2.0 * dot(&v, &col[k..]) / vnorm2;
                for (c, vi) in col[k..].iter_mut().zip(&v) {
                    *c -= f * vi;
                }
            }
            let f = 2.0 * dot(&v, &rhs[k..]) / vnorm2;
            for (r, vi) in rhs[k..].iter_mut().zip(&v) {
                *r -= f * vi;
            }
        }
        a[k][k] = alpha;
    }

    let mut beta = vec![0.0; q];
    for k in (0..q).rev() {
        let mut s = rhs[k];
        for j in k + 1..q {
            s -= a[j][k] * beta[j];
        }
        beta[k] = s / a[k][k];
    }
    Ok(beta)
}
