use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};
use gdpcast_cli::config::LoadedConfig;
use gdpcast_cli::error::{CliError, ExitCode};
use gdpcast_cli::pipeline::{prepare, run_pipeline};
use gdpcast_cli::synth::{read_config, run_synth};

/// Rolling-origin comparison of GDP nowcasting models.
///
/// Penalised models use alpha = 1 for ridge and alpha = 0 for the LASSO,
/// the reverse of glmnet, and the penalty carries no 1/n factor.
#[derive(Parser)]
#[command(name = "gdpcast", version)]
struct Cli {
    /// Where report files go; overrides `[output] dir`.
    #[arg(long, global = true, env = "GDPCAST_OUTPUT_DIR")]
    output_dir: Option<PathBuf>,

    /// Overrides the scenario seed (synth only).
    #[arg(long, global = true, env = "GDPCAST_SEED")]
    seed: Option<u64>,

    /// Worker threads. Output does not depend on it.
    #[arg(long, global = true, env = "GDPCAST_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write the report files.
    Run { config: PathBuf },
    /// Write a synthetic dataset as CSV.
    Synth { scenario: PathBuf },
    /// Check a config and its data without fitting anything.
    Validate { config: PathBuf },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config } => {
            let loaded = LoadedConfig::read(&config)?;
            let out = run_pipeline(&loaded, cli.output_dir.as_deref())?;
            println!("{:<16} {:>12} {:>12}", "model", "MAE", "RMSE");
            for m in &out.report.models {
                match &m.summary {
                    Some(s) => println!("{:<16} {:>12.6} {:>12.6}", m.name, s.mae, s.rmse),
                    None => println!("{:<16} {:>12} {:>12}", m.name, "failed", "failed"),
                }
            }
            for e in &out.report.ensembles {
                println!("{:<16} {:>12.6} {:>12.6}", e.name, e.summary.mae, e.summary.rmse);
            }
            println!("wrote {} files to {}", out.files.len(), out.output_dir.display());
        }
        Command::Synth { scenario } => {
            let mut cfg = read_config(&scenario)?;
            if let Some(seed) = cli.seed {
                cfg.scenario.seed = seed;
            }
            let dir = cli.output_dir.unwrap_or_else(|| PathBuf::from("."));
            let path = run_synth(&cfg, &dir)?;
            println!("wrote {}", path.display());
        }
        Command::Validate { config } => {
            let loaded = LoadedConfig::read(&config)?;
            let p = prepare(&loaded)?;
            println!(
                "ok: {} observations {}-{}, {} predictors, k = {}, m = {}, {} models",
                p.frame.len(),
                p.frame.periods[0],
                p.frame.periods[p.frame.len() - 1],
                p.frame.n_predictors(),
                p.plan.k,
                p.plan.m,
                p.specs.len()
            );
            for (series, periods) in &p.frame.outliers {
                let list: Vec<String> = periods.iter().map(ToString::to_string).collect();
                println!("outliers clamped in {series}: {}", list.join(", "));
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            process::exit(ExitCode::Config as i32);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            process::exit(ExitCode::Other as i32);
        }
    }
    if let Err(e) = execute(cli) {
        eprintln!("error: {e}");
        process::exit(e.exit_code() as i32);
    }
}
