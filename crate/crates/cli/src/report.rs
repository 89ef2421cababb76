//! Report files: `report.json`, `errors_by_fold.csv`, `cumabs.csv`, and one
//! `cumabs_<window>.csv` per sub-window when a split marker is set.
//!
//! Floats are written in the shortest form that parses back to the same
//! value, so every number in `report.json` can be recomputed from
//! `errors_by_fold.csv`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use gdpcast_core::evalharness::{cumulative_abs_error, mae, rmse, CvReport, FoldOutcome, ModelKind, WindowMode};
use gdpcast_core::preprocess::Period;
use serde::Serialize;

use crate::error::{CliError, Result};

/// Provenance and sample facts that are not part of [`CvReport`].
#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub config_sha256: String,
    pub data_sha256: String,
    pub response: String,
    pub predictors: Vec<String>,
    pub sample_periods: Vec<Period>,
    pub outliers: BTreeMap<String, Vec<Period>>,
    pub split: Option<Period>,
}

/// One output column: a model or an ensemble.
struct Series<'a> {
    name: &'a str,
    predictions: Vec<Option<f64>>,
    errors: Option<Vec<f64>>,
}

fn series(report: &CvReport) -> Vec<Series<'_>> {
    let mut out: Vec<Series> = report
        .models
        .iter()
        .map(|m| Series {
            name: &m.name,
            predictions: m.folds.iter().map(FoldOutcome::prediction).collect(),
            errors: m.errors(),
        })
        .collect();
    out.extend(report.ensembles.iter().map(|e| Series {
        name: &e.name,
        predictions: e.predictions.iter().copied().map(Some).collect(),
        errors: Some(e.errors.clone()),
    }));
    out
}

#[derive(Serialize)]
struct FoldMeta {
    fold: usize,
    train_start: Period,
    train_end: Period,
    test: Period,
}

#[derive(Serialize)]
struct Plan {
    n: usize,
    k: usize,
    m: usize,
    window: WindowMode,
    folds: Vec<FoldMeta>,
}

#[derive(Serialize)]
struct FailedFold {
    fold: usize,
    period: Period,
    reason: String,
}

#[derive(Serialize)]
struct ModelEntry<'a> {
    name: &'a str,
    spec: &'a ModelKind,
    mae: Option<f64>,
    rmse: Option<f64>,
    failed_folds: Vec<FailedFold>,
}

#[derive(Serialize)]
struct EnsembleEntry<'a> {
    name: &'a str,
    members: &'a [String],
    mae: f64,
    rmse: f64,
}

#[derive(Serialize)]
struct Metric<'a> {
    name: &'a str,
    mae: Option<f64>,
    rmse: Option<f64>,
}

#[derive(Serialize)]
struct SubWindow<'a> {
    name: &'static str,
    first: Period,
    last: Period,
    folds: usize,
    models: Vec<Metric<'a>>,
}

#[derive(Serialize)]
struct Sample<'a> {
    first: Period,
    last: Period,
    n: usize,
    response: &'a str,
    predictors: &'a [String],
}

#[derive(Serialize)]
struct ReportJson<'a> {
    config_sha256: &'a str,
    data_sha256: &'a str,
    sample: Sample<'a>,
    plan: Plan,
    outliers: &'a BTreeMap<String, Vec<Period>>,
    models: Vec<ModelEntry<'a>>,
    ensembles: Vec<EnsembleEntry<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split: Option<Period>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    windows: Vec<SubWindow<'a>>,
}

/// Fold ranges `(name, start..end)` on either side of `split`.
pub fn sub_windows(test_periods: &[Period], split: Period) -> Result<[(&'static str, std::ops::Range<usize>); 2]> {
    let cut = test_periods.iter().position(|p| *p >= split).unwrap_or(test_periods.len());
    if cut == 0 || cut == test_periods.len() {
        return Err(CliError::Config(format!(
            "split {split} does not fall inside the test window {}-{}",
            test_periods[0],
            test_periods[test_periods.len() - 1]
        )));
    }
    Ok([("pre", 0..cut), ("post", cut..test_periods.len())])
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_bytes(header: Vec<String>, rows: Vec<Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Csv {
        path: PathBuf::from("<report>"),
        message: e.to_string(),
    };
    w.write_record(&header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Csv {
        path: PathBuf::from("<report>"),
        message: e.to_string(),
    })
}

fn cumabs_table(periods: &[Period], all: &[Series], range: std::ops::Range<usize>) -> Result<Vec<u8>> {
    let mut header = vec!["period".to_string()];
    header.extend(all.iter().map(|s| s.name.to_string()));
    let paths: Vec<Option<Vec<f64>>> = all
        .iter()
        .map(|s| s.errors.as_ref().map(|e| cumulative_abs_error(&e[range.clone()])))
        .collect();
    let rows = range
        .clone()
        .enumerate()
        .map(|(i, fold)| {
            let mut row = vec![periods[fold].to_string()];
            row.extend(paths.iter().map(|p| opt_cell(p.as_ref().map(|p| p[i]))));
            row
        })
        .collect();
    csv_bytes(header, rows)
}

/// Renders every output file in memory, in a fixed order.
pub fn render(report: &CvReport, meta: &RunMeta) -> Result<Vec<(String, Vec<u8>)>> {
    let all = series(report);
    let periods = &report.test_periods;
    let at = |i: usize| meta.sample_periods[i];

    let windows = match meta.split {
        Some(split) => sub_windows(periods, split)?.to_vec(),
        None => Vec::new(),
    };

    let json = ReportJson {
        config_sha256: &meta.config_sha256,
        data_sha256: &meta.data_sha256,
        sample: Sample {
            first: meta.sample_periods[0],
            last: meta.sample_periods[meta.sample_periods.len() - 1],
            n: meta.sample_periods.len(),
            response: &meta.response,
            predictors: &meta.predictors,
        },
        plan: Plan {
            n: report.plan.n,
            k: report.plan.k,
            m: report.plan.m,
            window: report.plan.window,
            folds: report
                .plan
                .folds
                .iter()
                .enumerate()
                .map(|(i, f)| FoldMeta {
                    fold: i + 1,
                    train_start: at(f.train_start),
                    train_end: at(f.train_end),
                    test: at(f.test_index),
                })
                .collect(),
        },
        outliers: &meta.outliers,
        models: report
            .models
            .iter()
            .map(|m| ModelEntry {
                name: &m.name,
                spec: &m.spec,
                mae: m.summary.as_ref().map(|s| s.mae),
                rmse: m.summary.as_ref().map(|s| s.rmse),
                failed_folds: m
                    .folds
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| match f {
                        FoldOutcome::Failed { reason } => Some(FailedFold {
                            fold: i + 1,
                            period: periods[i],
                            reason: reason.clone(),
                        }),
                        FoldOutcome::Ok { .. } => None,
                    })
                    .collect(),
            })
            .collect(),
        ensembles: report
            .ensembles
            .iter()
            .map(|e| EnsembleEntry {
                name: &e.name,
                members: &e.members,
                mae: e.summary.mae,
                rmse: e.summary.rmse,
            })
            .collect(),
        split: meta.split,
        windows: windows
            .iter()
            .map(|(name, range)| SubWindow {
                name,
                first: periods[range.start],
                last: periods[range.end - 1],
                folds: range.len(),
                models: all
                    .iter()
                    .map(|s| {
                        let e = s.errors.as_ref().map(|e| &e[range.clone()]);
                        Metric {
                            name: s.name,
                            mae: e.and_then(|e| mae(e).ok()),
                            rmse: e.and_then(|e| rmse(e).ok()),
                        }
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut report_json = serde_json::to_vec_pretty(&json).expect("report serialises");
    report_json.push(b'\n');

    let mut header = vec!["period".to_string(), "actual".to_string()];
    header.extend(all.iter().map(|s| s.name.to_string()));
    let rows = (0..periods.len())
        .map(|i| {
            let mut row = vec![periods[i].to_string(), report.actuals[i].to_string()];
            row.extend(all.iter().map(|s| opt_cell(s.predictions[i])));
            row
        })
        .collect();

    let mut files = vec![
        ("report.json".to_string(), report_json),
        ("errors_by_fold.csv".to_string(), csv_bytes(header, rows)?),
        ("cumabs.csv".to_string(), cumabs_table(periods, &all, 0..periods.len())?),
    ];
    for (name, range) in windows {
        files.push((format!("cumabs_{name}.csv"), cumabs_table(periods, &all, range)?));
    }
    Ok(files)
}

/// Writes rendered files into `dir`. Either every file lands or none does:
/// on failure, anything already written is removed.
pub fn write_files(dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::new();
    let mut done: Vec<PathBuf> = Vec::new();
    let result = (|| {
        for (name, bytes) in files {
            let target = dir.join(name);
            let tmp = dir.join(format!(".{name}.partial"));
            std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
            staged.push((tmp, target));
        }
        for (tmp, target) in &staged {
            std::fs::rename(tmp, target).map_err(|e| CliError::io(target, e))?;
            done.push(target.clone());
        }
        Ok(())
    })();
    if let Err(e) = result {
        for (tmp, _) in &staged {
            let _ = std::fs::remove_file(tmp);
        }
        for path in &done {
            let _ = std::fs::remove_file(path);
        }
        return Err(e);
    }
    Ok(done)
}
