use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How raw levels become a model input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    /// `100 * ln(level)`.
    Log100,
    /// `level - offset`, e.g. 100 for sentiment indices, 50 for PMIs.
    LevelOffset { offset: f64 },
    /// Already a percentage; passed through.
    Percent,
    Identity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformSpec {
    #[serde(flatten)]
    pub kind: TransformKind,
    /// Take the quarter-on-quarter first difference after the level transform.
    pub difference: bool,
}

impl TransformSpec {
    pub const fn new(kind: TransformKind, difference: bool) -> Self {
        Self { kind, difference }
    }

    /// Growth rate in log points: first difference of `100 * ln(level)`.
    pub const fn log_growth() -> Self {
        Self::new(TransformKind::Log100, true)
    }

    pub const fn identity() -> Self {
        Self::new(TransformKind::Identity, false)
    }

    pub fn validate(&self) -> Result<()> {
        if let TransformKind::LevelOffset { offset } = self.kind {
            if !offset.is_finite() {
                return Err(Error::Config(format!("level offset {offset} is not finite")));
            }
        }
        Ok(())
    }

    /// Number of leading observations consumed by the transform.
    pub fn lag(&self) -> usize {
        usize::from(self.difference)
    }
}

/// Applies `spec` to a level series. Differencing shortens the output by one.
///
/// A non-positive level under `Log100` fails with [`Error::NonPositiveLevel`]
/// carrying its index; callers holding a calendar translate it to a period.
pub fn apply_transform(levels: &[f64], spec: &TransformSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut out = Vec::with_capacity(levels.len());
    for (index, &value) in levels.iter().enumerate() {
        let v = match spec.kind {
            TransformKind::Log100 => {
                if !(value > 0.0) {
                    return Err(Error::NonPositiveLevel { index, value });
                }
                100.0 * value.ln()
            }
            TransformKind::LevelOffset { offset } => value - offset,
            TransformKind::Percent | TransformKind::Identity => value,
        };
        out.push(v);
    }
    if spec.difference {
        if out.len() < 2 {
            return Err(Error::Domain(format!(
                "differencing needs at least 2 levels, got {}",
                out.len()
            )));
        }
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}
