use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use povm_entropy::{run, RunConfig, Scenario};

#[derive(Parser)]
#[command(
    name = "povm-entropy",
    version,
    about = "Numerical checks of entropic uncertainty and log-Sobolev bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and emit its report. Exits nonzero if any record fails.
    Run {
        /// One of: bases, mub, tensor-equality, lemmas, refinement, sphere,
        /// landau, euclidean, logsob-compare, hermite, circle, fuzz-theorem1.
        scenario: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Pass threshold: a record passes iff deficit >= -tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Magnetic field strength for the Landau scenarios.
        #[arg(long = "B", value_name = "B")]
        b: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// `a:b`, `a:b:n` or `log:a:b:n`.
        #[arg(long)]
        nbar_grid: Option<String>,
        /// Quadrature nodes for hermite and circle.
        #[arg(long)]
        grid_points: Option<usize>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> Result<bool> {
    let Command::Run {
        scenario,
        dim,
        trials,
        seed,
        tolerance,
        b,
        t,
        nbar_grid,
        grid_points,
        out,
        format,
    } = Cli::parse().command;

    let scenario: Scenario = scenario.parse()?;
    let defaults = RunConfig::default();
    let config = RunConfig {
        dim: dim.unwrap_or(defaults.dim),
        trials: trials.unwrap_or(defaults.trials),
        seed: seed.unwrap_or(defaults.seed),
        tolerance: tolerance.unwrap_or(defaults.tolerance),
        b: b.unwrap_or(defaults.b),
        t: t.unwrap_or(defaults.t),
        nbar_grid: nbar_grid.unwrap_or(defaults.nbar_grid),
        grid_points: grid_points.unwrap_or(defaults.grid_points),
    };
    let report = run(scenario, &config).with_context(|| format!("scenario {scenario}"))?;
    let text = match format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match out {
        Some(path) => {
            fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => println!("{text}"),
    }
    let a = &report.aggregate;
    eprintln!(
        "{scenario}: {}/{} passed, min deficit {:e}, max violation {:e}",
        a.passed, a.count, a.min_deficit, a.max_violation
    );
    Ok(report.all_passed())
}
