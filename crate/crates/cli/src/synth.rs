//! Synthetic datasets in the ingest CSV layout.
//!
//! ```toml
//! emit = "levels"        # or "changes" (the default)
//! file = "synthetic.csv"
//!
//! [scenario]
//! n = 95
//! q = 14
//! break_at = 79
//! break_kind = "loading_flip"
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use gdpcast_core::preprocess::{RawColumn, RawTable, SeriesFrame};
use gdpcast_core::synthgen::{generate, ScenarioSpec};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::ingest::write_table;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    /// The generated values as they are; read back with identity transforms.
    #[default]
    Changes,
    /// Levels starting at 100 one quarter earlier, whose `log100` first
    /// differences are the generated values.
    Levels,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    #[serde(default)]
    pub emit: Emit,
    #[serde(default = "default_file")]
    pub file: PathBuf,
    #[serde(default)]
    pub scenario: ScenarioSpec,
}

fn default_file() -> PathBuf {
    PathBuf::from("synthetic.csv")
}

pub fn read_config(path: &Path) -> Result<SynthConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let cfg: SynthConfig = toml::from_str(&text).map_err(|e| CliError::Config(e.to_string()))?;
    cfg.scenario
        .validate()
        .map_err(|e| CliError::Config(format!("scenario: {e}")))?;
    Ok(cfg)
}

pub fn frame_to_table(frame: &SeriesFrame, emit: Emit) -> RawTable {
    let mut series = vec![(frame.response_name.clone(), frame.response.clone())];
    for (j, name) in frame.predictor_names.iter().enumerate() {
        series.push((name.clone(), frame.predictors.column(j)));
    }
    match emit {
        Emit::Changes => RawTable {
            periods: frame.periods.clone(),
            columns: series
                .into_iter()
                .map(|(name, v)| RawColumn {
                    name,
                    values: v.into_iter().map(Some).collect(),
                })
                .collect(),
        },
        Emit::Levels => RawTable {
            periods: frame.periods[0].offset(-1).range(frame.len() + 1),
            columns: series
                .into_iter()
                .map(|(name, v)| {
                    let mut log_level = 100.0 * 100f64.ln();
                    let mut values = vec![Some(100.0)];
                    for change in v {
                        log_level += change;
                        values.push(Some((log_level / 100.0).exp()));
                    }
                    RawColumn { name, values }
                })
                .collect(),
        },
    }
}

/// Generates the scenario and writes it under `dir`; returns the file path.
pub fn run_synth(cfg: &SynthConfig, dir: &Path) -> Result<PathBuf> {
    let frame = generate(&cfg.scenario).map_err(CliError::stage("synth"))?;
    let table = frame_to_table(&frame, cfg.emit);
    let mut bytes = Vec::new();
    write_table(&table, &mut bytes).map_err(|e| CliError::io(&cfg.file, e))?;
    let written = crate::report::write_files(dir, &[(cfg.file.to_string_lossy().into_owned(), bytes)])?;
    Ok(written.into_iter().next().expect("one file"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use gdpcast_core::preprocess::{apply_transform, TransformSpec};

    #[test]
    fn levels_difference_back_to_the_changes() {
        let frame = generate(&ScenarioSpec { n: 30, q: 2, factor_loadings: vec![1.0, -0.5], seed: 3, ..ScenarioSpec::default() }).unwrap();
        let table = frame_to_table(&frame, Emit::Levels);
        assert_eq!(table.periods.len(), 31);
        assert_eq!(table.periods[1], frame.periods[0]);
        let levels: Vec<f64> = table.columns[0].values.iter().map(|v| v.unwrap()).collect();
        let back = apply_transform(&levels, &TransformSpec::log_growth()).unwrap();
        for (a, b) in back.iter().zip(&frame.response) {
            assert!((a - b).abs() < 1e-9, "{a} {b}");
        }
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg: SynthConfig = toml::from_str("").unwrap();
        assert_eq!(cfg.emit, Emit::Changes);
        assert_eq!(cfg.scenario, ScenarioSpec::default());
        let bad: SynthConfig = toml::from_str("[scenario]\nq = 3\n").unwrap();
        assert!(bad.scenario.validate().is_err());
        assert!(toml::from_str::<SynthConfig>("[scenario]\nwhat = 1\n").is_err());
    }
}
