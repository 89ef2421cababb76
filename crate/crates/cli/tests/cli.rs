use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gdpcast_cli::ingest::{ingest_csv, read_table};
use gdpcast_cli::synth::{frame_to_table, Emit};
use gdpcast_core::preprocess::{build_frame, TransformSpec};
use gdpcast_core::synthgen::{generate, ScenarioSpec};

fn assets() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("assets")
}

fn gdpcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gdpcast"))
        .args(args)
        .env_remove("GDPCAST_OUTPUT_DIR")
        .env_remove("GDPCAST_SEED")
        .env_remove("GDPCAST_THREADS")
        .output()
        .unwrap()
}

fn write_config(dir: &Path, models: &str, extra_data: &str) -> PathBuf {
    let data = assets().join("example_levels.csv");
    let mut text = format!(
        "[data]\npath = {:?}\nresponse = \"y\"\nk = 36\n{extra_data}\n\n[hampel]\nenabled = false\n\n[transform.y]\nkind = \"log100\"\ndifference = true\n\n[transform.x01]\nkind = \"log100\"\ndifference = true\n\n[transform.x02]\nkind = \"log100\"\ndifference = true\n",
        data.to_str().unwrap()
    );
    text.push_str(models);
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn read_csv(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path).unwrap();
    r.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect()
}

#[test]
fn bundled_example_runs() {
    let out = tempfile::tempdir().unwrap();
    let cfg = assets().join("example.toml");
    let o = gdpcast(&["run", cfg.to_str().unwrap(), "--output-dir", out.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.json", "errors_by_fold.csv", "cumabs.csv", "cumabs_pre.csv", "cumabs_post.csv"] {
        assert!(out.path().join(f).exists(), "{f}");
    }
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(out.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["plan"]["m"], 59);
    assert_eq!(report["plan"]["k"], 36);
    assert_eq!(report["sample"]["n"], 95);
    assert_eq!(report["plan"]["folds"][0]["train_start"], "2000Q2");
    assert_eq!(report["plan"]["folds"][0]["train_end"], "2014Q4");
    assert_eq!(report["plan"]["folds"][35]["test"], "2023Q4");

    // every summary number comes back from errors_by_fold.csv
    let rows = read_csv(&out.path().join("errors_by_fold.csv"));
    let header = &rows[0];
    let actual: Vec<f64> = rows[1..].iter().map(|r| r[1].parse().unwrap()).collect();
    let mut checked = 0;
    for entry in report["models"].as_array().unwrap().iter().chain(report["ensembles"].as_array().unwrap()) {
        let col = header.iter().position(|h| h == entry["name"].as_str().unwrap()).unwrap();
        let e: Vec<f64> = rows[1..].iter().zip(&actual).map(|(r, a)| a - r[col].parse::<f64>().unwrap()).collect();
        let mae = e.iter().map(|v| v.abs()).sum::<f64>() / e.len() as f64;
        let rmse = (e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64).sqrt();
        assert_eq!(entry["mae"].as_f64().unwrap(), mae);
        assert_eq!(entry["rmse"].as_f64().unwrap(), rmse);
        checked += 1;
    }
    assert_eq!(checked, 7);

    // sub-window tables partition the test folds
    let pre = read_csv(&out.path().join("cumabs_pre.csv"));
    let post = read_csv(&out.path().join("cumabs_post.csv"));
    assert_eq!(pre.len() - 1 + post.len() - 1, 36);
    assert_eq!(pre.last().unwrap()[0], "2019Q4");
    assert_eq!(post[1][0], "2020Q1");
}

#[test]
fn single_model_report_has_three_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "\n[[model]]\nname = \"pls1\"\nkind = \"pls\"\ndirections = 1\n", "");
    let o = gdpcast(&["run", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = dir.path().join("gdpcast-out");
    let rows = read_csv(&out.join("errors_by_fold.csv"));
    assert_eq!(rows[0], vec!["period", "actual", "pls1"]);
    assert_eq!(rows.len(), 37);
    assert!(!out.join("cumabs_pre.csv").exists());
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "\n[[model]]\nname = \"ols\"\nkind = \"ols\"\n", "");
    let target = dir.path().join("env-out");
    let o = Command::new(env!("CARGO_BIN_EXE_gdpcast"))
        .args(["run", cfg.to_str().unwrap()])
        .env("GDPCAST_OUTPUT_DIR", &target)
        .env("GDPCAST_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(target.join("report.json").exists());
}

#[test]
fn exit_codes_by_failure_class() {
    let dir = tempfile::tempdir().unwrap();

    let missing = gdpcast(&["run", dir.path().join("nope.toml").to_str().unwrap()]);
    assert_eq!(missing.status.code(), Some(1));

    let cfg = write_config(dir.path(), "\n[[model]]\nname = \"p\"\nkind = \"pls\"\n", "");
    let o = gdpcast(&["validate", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("directions"));

    let cfg = write_config(dir.path(), "\n[[model]]\nname = \"ols\"\nkind = \"ols\"\n", "split = \"1990Q1\"");
    assert_eq!(gdpcast(&["run", cfg.to_str().unwrap()]).status.code(), Some(2));

    // a quarter missing from the data
    let text = std::fs::read_to_string(assets().join("example_levels.csv")).unwrap();
    let gapped: Vec<&str> = text.lines().enumerate().filter(|(i, _)| *i != 40).map(|(_, l)| l).collect();
    let data = dir.path().join("gapped.csv");
    std::fs::write(&data, gapped.join("\n")).unwrap();
    let cfg_text = std::fs::read_to_string(&cfg).unwrap().replace(
        assets().join("example_levels.csv").to_str().unwrap(),
        data.to_str().unwrap(),
    ).replace("split = \"1990Q1\"", "");
    std::fs::write(&cfg, cfg_text).unwrap();
    let o = gdpcast(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 41"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn numerical_failure_writes_nothing() {
    // x02 duplicated as x03 makes every OLS window singular; the ensemble
    // over OLS then has nothing to take a median of
    let dir = tempfile::tempdir().unwrap();
    let mut table = ingest_csv(&assets().join("example_levels.csv")).unwrap();
    table.columns.truncate(3);
    let mut dup = table.columns[2].clone();
    dup.name = "x03".into();
    table.columns.push(dup);
    let data = dir.path().join("dup.csv");
    let mut bytes = Vec::new();
    gdpcast_cli::ingest::write_table(&table, &mut bytes).unwrap();
    std::fs::write(&data, bytes).unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        format!(
            "[data]\npath = {:?}\nresponse = \"y\"\nk = 36\n\n[transform.y]\nkind = \"log100\"\ndifference = true\n[transform.x02]\nkind = \"log100\"\ndifference = true\n[transform.x03]\nkind = \"log100\"\ndifference = true\n\n[[model]]\nname = \"ols\"\nkind = \"ols\"\n[[model]]\nname = \"pls1\"\nkind = \"pls\"\ndirections = 1\n\n[[ensemble]]\nname = \"e\"\nmembers = [\"ols\", \"pls1\"]\n",
            data.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = gdpcast(&["run", cfg.to_str().unwrap(), "--output-dir", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!out.exists() || std::fs::read_dir(&out).unwrap().next().is_none());
}

#[test]
fn validate_reports_the_plan() {
    let o = gdpcast(&["validate", assets().join("example.toml").to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("95 observations 2000Q2-2023Q4"), "{text}");
    assert!(text.contains("m = 59"));
}

#[test]
fn synth_command_honours_seed() {
    let dir = tempfile::tempdir().unwrap();
    let scen = dir.path().join("s.toml");
    std::fs::write(&scen, "file = \"a.csv\"\n[scenario]\nn = 20\nq = 2\nfactor_loadings = [1.0, 0.5]\n").unwrap();
    let run = |seed: &str, out: &str| {
        let o = gdpcast(&["synth", scen.to_str().unwrap(), "--seed", seed, "--output-dir", dir.path().join(out).to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.path().join(out).join("a.csv")).unwrap()
    };
    assert_eq!(run("5", "a"), run("5", "b"));
    assert_ne!(run("5", "a"), run("6", "c"));
}

#[test]
fn synthetic_csv_round_trip_is_lossless() {
    for seed in 0..5 {
        let frame = generate(&ScenarioSpec { seed, ..ScenarioSpec::default() }).unwrap();
        let mut bytes = Vec::new();
        gdpcast_cli::ingest::write_table(&frame_to_table(&frame, Emit::Changes), &mut bytes).unwrap();
        let table = read_table(bytes.as_slice(), Path::new("mem.csv")).unwrap();
        let specs: BTreeMap<String, TransformSpec> =
            table.columns.iter().map(|c| (c.name.clone(), TransformSpec::identity())).collect();
        let back = build_frame(&table, &specs, "y", None).unwrap();
        assert_eq!(back, frame);

        let mut again = Vec::new();
        gdpcast_cli::ingest::write_table(&frame_to_table(&back, Emit::Changes), &mut again).unwrap();
        assert_eq!(again, bytes);
    }
}
