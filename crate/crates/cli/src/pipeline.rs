//! ingest → build_frame → fold plan → run_cv → ensembles → files.

use std::path::{Path, PathBuf};

use gdpcast_core::evalharness::{make_fold_plan_with, run_cv, CvReport, FoldPlan, ModelSpec};
use gdpcast_core::preprocess::{build_frame, SeriesFrame};
use sha2::{Digest, Sha256};

use crate::config::LoadedConfig;
use crate::error::{CliError, Result};
use crate::ingest::ingest_csv;
use crate::report::{render, sub_windows, write_files, RunMeta};

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything checked and built, short of evaluating models.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub frame: SeriesFrame,
    pub plan: FoldPlan,
    pub specs: Vec<ModelSpec>,
    pub meta: RunMeta,
}

pub fn prepare(loaded: &LoadedConfig) -> Result<Prepared> {
    let cfg = &loaded.config;
    let data_path = loaded.data_path();
    let data_bytes = std::fs::read(&data_path).map_err(|e| CliError::io(&data_path, e))?;
    let raw = ingest_csv(&data_path)?;
    let transforms = cfg.transform_specs()?;
    let specs = cfg.model_specs()?;
    let hampel = cfg.hampel.to_config();
    let frame = build_frame(&raw, &transforms, &cfg.data.response, hampel.as_ref())
        .map_err(CliError::stage("preprocess"))?;
    let plan = make_fold_plan_with(frame.len(), cfg.data.k, cfg.data.window)
        .map_err(CliError::stage("fold plan"))?;
    if let Some(split) = cfg.data.split {
        let tests: Vec<_> = plan.folds.iter().map(|f| frame.periods[f.test_index]).collect();
        sub_windows(&tests, split)?;
    }
    let meta = RunMeta {
        config_sha256: sha256_hex(&loaded.source),
        data_sha256: sha256_hex(&data_bytes),
        response: frame.response_name.clone(),
        predictors: frame.predictor_names.clone(),
        sample_periods: frame.periods.clone(),
        outliers: frame.outliers.clone(),
        split: cfg.data.split,
    };
    Ok(Prepared {
        frame,
        plan,
        specs,
        meta,
    })
}

pub fn evaluate(loaded: &LoadedConfig, prepared: &Prepared) -> Result<CvReport> {
    let mut report =
        run_cv(&prepared.frame, &prepared.specs, &prepared.plan).map_err(CliError::stage("evaluation"))?;
    for e in &loaded.config.ensembles {
        report
            .add_ensemble(&e.name, &e.members)
            .map_err(CliError::stage("ensemble"))?;
    }
    Ok(report)
}

#[derive(Debug)]
pub struct PipelineOutput {
    pub report: CvReport,
    pub meta: RunMeta,
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// Runs the whole experiment and writes the report files. Nothing is written
/// unless every step succeeds.
pub fn run_pipeline(loaded: &LoadedConfig, output_dir: Option<&Path>) -> Result<PipelineOutput> {
    let prepared = prepare(loaded)?;
    let report = evaluate(loaded, &prepared)?;
    let rendered = render(&report, &prepared.meta)?;
    let dir = loaded.output_dir(output_dir);
    let files = write_files(&dir, &rendered)?;
    Ok(PipelineOutput {
        report,
        meta: prepared.meta,
        output_dir: dir,
        files,
    })
}
