//! Run configuration, read from TOML.
//!
//! ```toml
//! [data]
//! path = "levels.csv"        # relative to this file
//! response = "gdp"
//! k = 36
//! split = "2020Q1"           # optional: report pre/post sub-windows
//!
//! [hampel]
//! window = 19
//! n_mad = 2.5
//!
//! [transform.gdp]
//! kind = "log100"
//! difference = true
//!
//! [[model]]
//! name = "ridge"
//! kind = "ridge"
//! rule = "cv_min"
//!
//! [[ensemble]]
//! name = "median_best"
//! members = ["ridge", "lasso", "pls1"]
//! ```
//!
//! `alpha` follows the penalised objective used throughout: 1 is ridge and
//! 0 is the LASSO, the reverse of glmnet.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gdpcast_core::evalharness::{LambdaChoice, ModelKind, ModelSpec, Retune, WindowMode};
use gdpcast_core::models::PlsIntercept;
use gdpcast_core::preprocess::{HampelConfig, Period, TransformKind, TransformSpec};
use gdpcast_core::tuning::{ErrorMetric, SelectionRule, TuningConfig};
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataSection,
    #[serde(default)]
    pub hampel: HampelSection,
    pub transform: BTreeMap<String, TransformEntry>,
    #[serde(rename = "model")]
    pub models: Vec<ModelEntry>,
    #[serde(default, rename = "ensemble")]
    pub ensembles: Vec<EnsembleEntry>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSection {
    pub path: PathBuf,
    pub response: String,
    pub k: usize,
    pub split: Option<Period>,
    #[serde(default)]
    pub window: WindowMode,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HampelSection {
    pub enabled: bool,
    pub window: usize,
    pub n_mad: f64,
}

impl Default for HampelSection {
    fn default() -> Self {
        let d = HampelConfig::default();
        Self {
            enabled: true,
            window: d.window,
            n_mad: d.n_mad,
        }
    }
}

impl HampelSection {
    pub fn to_config(&self) -> Option<HampelConfig> {
        self.enabled.then_some(HampelConfig {
            window: self.window,
            n_mad: self.n_mad,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformName {
    Log100,
    LevelOffset,
    Percent,
    Identity,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformEntry {
    pub kind: TransformName,
    pub offset: Option<f64>,
    #[serde(default)]
    pub difference: bool,
}

impl TransformEntry {
    fn to_spec(&self, series: &str) -> Result<TransformSpec> {
        let kind = match (self.kind, self.offset) {
            (TransformName::LevelOffset, Some(offset)) => TransformKind::LevelOffset { offset },
            (TransformName::LevelOffset, None) => {
                return Err(CliError::Config(format!("transform.{series}: level_offset needs `offset`")))
            }
            (_, Some(_)) => {
                return Err(CliError::Config(format!(
                    "transform.{series}: `offset` only applies to level_offset"
                )))
            }
            (TransformName::Log100, None) => TransformKind::Log100,
            (TransformName::Percent, None) => TransformKind::Percent,
            (TransformName::Identity, None) => TransformKind::Identity,
        };
        let spec = TransformSpec::new(kind, self.difference);
        spec.validate()
            .map_err(|e| CliError::Config(format!("transform.{series}: {e}")))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelName {
    Ar1,
    Ols,
    Ridge,
    Lasso,
    Penalised,
    Pls,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelEntry {
    pub name: String,
    pub kind: ModelName,
    /// Penalised only; implied by `ridge` (1) and `lasso` (0).
    pub alpha: Option<f64>,
    /// A fixed penalty weight. Without it λ is tuned.
    pub lambda: Option<f64>,
    pub rule: Option<SelectionRule>,
    pub inner_folds: Option<usize>,
    pub grid_count: Option<usize>,
    pub grid_ratio: Option<f64>,
    pub metric: Option<ErrorMetric>,
    pub retune: Option<Retune>,
    /// PLS only.
    pub directions: Option<usize>,
    pub intercept: Option<PlsIntercept>,
}

impl ModelEntry {
    fn has_tuning_keys(&self) -> bool {
        self.rule.is_some()
            || self.inner_folds.is_some()
            || self.grid_count.is_some()
            || self.grid_ratio.is_some()
            || self.metric.is_some()
            || self.retune.is_some()
    }

    fn reject(&self, key: &str, present: bool) -> Result<()> {
        if present {
            Err(CliError::Config(format!(
                "model `{}`: `{key}` does not apply to {:?} models",
                self.name, self.kind
            )))
        } else {
            Ok(())
        }
    }

    pub fn to_spec(&self) -> Result<ModelSpec> {
        if self.name.is_empty() {
            return Err(CliError::Config("model names must be non-empty".into()));
        }
        let penalised = matches!(self.kind, ModelName::Ridge | ModelName::Lasso | ModelName::Penalised);
        if !penalised {
            self.reject("alpha", self.alpha.is_some())?;
            self.reject("lambda", self.lambda.is_some())?;
            self.reject("rule/inner_folds/grid_count/grid_ratio/metric/retune", self.has_tuning_keys())?;
        }
        if self.kind != ModelName::Pls {
            self.reject("directions", self.directions.is_some())?;
            self.reject("intercept", self.intercept.is_some())?;
        }
        let kind = match self.kind {
            ModelName::Ar1 => ModelKind::Ar1,
            ModelName::Ols => ModelKind::Ols,
            ModelName::Pls => {
                let directions = self.directions.ok_or_else(|| {
                    CliError::Config(format!("model `{}`: pls needs `directions` >= 1", self.name))
                })?;
                if directions == 0 {
                    return Err(CliError::Config(format!(
                        "model `{}`: pls needs `directions` >= 1",
                        self.name
                    )));
                }
                ModelKind::Pls {
                    directions,
                    intercept: self.intercept.unwrap_or_default(),
                }
            }
            ModelName::Ridge | ModelName::Lasso | ModelName::Penalised => {
                let implied = match self.kind {
                    ModelName::Ridge => Some(1.0),
                    ModelName::Lasso => Some(0.0),
                    _ => None,
                };
                let alpha = match (implied, self.alpha) {
                    (Some(a), None) => a,
                    (Some(_), Some(_)) => {
                        return Err(CliError::Config(format!(
                            "model `{}`: `alpha` is fixed by kind {:?}",
                            self.name, self.kind
                        )))
                    }
                    (None, Some(a)) => a,
                    (None, None) => {
                        return Err(CliError::Config(format!(
                            "model `{}`: penalised models need `alpha` in [0, 1]",
                            self.name
                        )))
                    }
                };
                if !(0.0..=1.0).contains(&alpha) {
                    return Err(CliError::Config(format!(
                        "model `{}`: alpha {alpha} outside [0, 1]",
                        self.name
                    )));
                }
                let lambda = match self.lambda {
                    Some(l) => {
                        self.reject("rule/inner_folds/grid_count/grid_ratio/metric/retune (with a fixed lambda)", self.has_tuning_keys())?;
                        if !(l >= 0.0 && l.is_finite()) {
                            return Err(CliError::Config(format!(
                                "model `{}`: lambda must be finite and >= 0",
                                self.name
                            )));
                        }
                        LambdaChoice::Fixed { lambda: l }
                    }
                    None => {
                        let d = TuningConfig::default();
                        let tuning = TuningConfig {
                            rule: self.rule.unwrap_or(d.rule),
                            inner_folds: self.inner_folds.unwrap_or(d.inner_folds),
                            grid_count: self.grid_count.unwrap_or(d.grid_count),
                            grid_ratio: self.grid_ratio.unwrap_or(d.grid_ratio),
                            metric: self.metric.unwrap_or(d.metric),
                        };
                        if tuning.inner_folds < 2 || tuning.grid_count < 2 || !(tuning.grid_ratio > 0.0 && tuning.grid_ratio < 1.0) {
                            return Err(CliError::Config(format!(
                                "model `{}`: need inner_folds >= 2, grid_count >= 2 and 0 < grid_ratio < 1",
                                self.name
                            )));
                        }
                        LambdaChoice::Tuned {
                            tuning,
                            retune: self.retune.unwrap_or_default(),
                        }
                    }
                };
                ModelKind::Penalised { alpha, lambda }
            }
        };
        Ok(ModelSpec::new(self.name.clone(), kind))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleEntry {
    pub name: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

/// A parsed config together with where it came from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub source: Vec<u8>,
    /// Directory relative paths are resolved against.
    pub base_dir: PathBuf,
}

impl LoadedConfig {
    pub fn read(path: &Path) -> Result<Self> {
        let source = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = std::str::from_utf8(&source)
            .map_err(|_| CliError::Config(format!("{} is not valid UTF-8", path.display())))?;
        let config = parse(text)?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self {
            config,
            source,
            base_dir,
        })
    }

    pub fn data_path(&self) -> PathBuf {
        self.base_dir.join(&self.config.data.path)
    }

    pub fn output_dir(&self, overridden: Option<&Path>) -> PathBuf {
        match (overridden, &self.config.output.dir) {
            (Some(dir), _) => dir.to_path_buf(),
            (None, Some(dir)) => self.base_dir.join(dir),
            (None, None) => self.base_dir.join("gdpcast-out"),
        }
    }
}

pub fn parse(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    config.check()?;
    Ok(config)
}

impl RunConfig {
    /// Checks that need no data.
    pub fn check(&self) -> Result<()> {
        if !self.transform.contains_key(&self.data.response) {
            return Err(CliError::Config(format!(
                "response `{}` has no [transform.{}] entry",
                self.data.response, self.data.response
            )));
        }
        if self.models.is_empty() {
            return Err(CliError::Config("at least one [[model]] is required".into()));
        }
        if let Some(h) = self.hampel.to_config() {
            h.validate().map_err(|e| CliError::Config(format!("hampel: {e}")))?;
        }
        self.transform_specs()?;
        let specs = self.model_specs()?;
        let mut names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
        for e in &self.ensembles {
            if names.contains(&e.name.as_str()) {
                return Err(CliError::Config(format!("duplicate model name `{}`", e.name)));
            }
            for m in &e.members {
                if !specs.iter().any(|s| &s.name == m) {
                    return Err(CliError::Config(format!(
                        "ensemble `{}`: unknown member `{m}`",
                        e.name
                    )));
                }
            }
            if e.members.is_empty() {
                return Err(CliError::Config(format!("ensemble `{}` has no members", e.name)));
            }
            names.push(&e.name);
        }
        Ok(())
    }

    pub fn transform_specs(&self) -> Result<BTreeMap<String, TransformSpec>> {
        self.transform
            .iter()
            .map(|(name, entry)| Ok((name.clone(), entry.to_spec(name)?)))
            .collect()
    }

    pub fn model_specs(&self) -> Result<Vec<ModelSpec>> {
        let specs: Vec<ModelSpec> = self.models.iter().map(ModelEntry::to_spec).collect::<Result<_>>()?;
        for (i, s) in specs.iter().enumerate() {
            if specs[..i].iter().any(|o| o.name == s.name) {
                return Err(CliError::Config(format!("duplicate model name `{}`", s.name)));
            }
        }
        Ok(specs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[data]
path = "d.csv"
response = "gdp"
k = 10

[transform.gdp]
kind = "log100"
difference = true

[transform.esi]
kind = "level_offset"
offset = 100

[[model]]
name = "ridge"
kind = "ridge"

[[model]]
name = "pls1"
kind = "pls"
directions = 1
"#;

    #[test]
    fn parses_a_minimal_config() {
        let c = parse(BASE).unwrap();
        assert!(c.hampel.enabled);
        assert_eq!(c.hampel.to_config(), Some(HampelConfig::default()));
        let t = c.transform_specs().unwrap();
        assert_eq!(t["esi"], TransformSpec::new(TransformKind::LevelOffset { offset: 100.0 }, false));
        let specs = c.model_specs().unwrap();
        assert_eq!(specs[0], ModelSpec::ridge());
        assert_eq!(specs[1], ModelSpec::pls(1));
    }

    fn fails(extra: &str, needle: &str) {
        let err = parse(&format!("{BASE}\n{extra}")).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
        assert!(err.to_string().contains(needle), "{err}");
    }

    #[test]
    fn rejects_bad_models() {
        fails("[[model]]\nname = \"x\"\nkind = \"pls\"\n", "directions");
        fails("[[model]]\nname = \"x\"\nkind = \"pls\"\ndirections = 0\n", "directions");
        fails("[[model]]\nname = \"x\"\nkind = \"ols\"\nalpha = 1.0\n", "alpha");
        fails("[[model]]\nname = \"x\"\nkind = \"ridge\"\nalpha = 0.5\n", "alpha");
        fails("[[model]]\nname = \"x\"\nkind = \"penalised\"\nalpha = 1.5\n", "alpha");
        fails("[[model]]\nname = \"x\"\nkind = \"penalised\"\nalpha = 0.5\nlambda = 1.0\nrule = \"aic\"\n", "fixed lambda");
        fails("[[model]]\nname = \"ridge\"\nkind = \"ols\"\n", "duplicate");
        fails("[[model]]\nname = \"x\"\nkind = \"lasso\"\ninner_folds = 1\n", "inner_folds");
        fails("[[model]]\nname = \"x\"\nkind = \"nope\"\n", "unknown variant");
    }

    #[test]
    fn rejects_bad_ensembles_and_sections() {
        fails("[[ensemble]]\nname = \"e\"\nmembers = [\"ridge\", \"zzz\"]\n", "zzz");
        fails("[[ensemble]]\nname = \"pls1\"\nmembers = [\"ridge\"]\n", "duplicate");
        fails("[hampel]\nwindow = 4\n", "hampel");
        fails("[surprise]\n", "surprise");
    }

    #[test]
    fn response_needs_a_transform() {
        let text = BASE.replace("response = \"gdp\"", "response = \"ipi\"");
        assert!(parse(&text).unwrap_err().to_string().contains("ipi"));
    }

    #[test]
    fn offset_rules() {
        let text = BASE.replace("offset = 100\n", "");
        assert!(parse(&text).unwrap_err().to_string().contains("offset"));
        let text = BASE.replace("kind = \"log100\"", "kind = \"log100\"\noffset = 3");
        assert!(parse(&text).unwrap_err().to_string().contains("offset"));
    }
}
