//! Command line driver: scenario runs, γ sweeps, validation and the
//! annulus benchmark.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nemflow_cli::config::ScenarioConfig;
use nemflow_cli::error::{CliError, Result};
use nemflow_cli::{run, validate};

#[derive(Parser)]
#[command(name = "nemflow", version, about = "Nematic flow past a small sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Runs one scenario and writes its artifacts.
    Run {
        /// JSON config file.
        config: PathBuf,
    },
    /// Runs a scenario for several (γ₁, γ₂) pairs and compares profiles.
    Sweep {
        /// JSON config file.
        config: PathBuf,
        /// Pairs as `g1:g2`, e.g. `0.2:0.18 0.1:0.09`.
        #[arg(long, num_args = 1.., required = true)]
        gammas: Vec<String>,
    },
    /// Runs the desk-scale validation suite.
    Validate,
    /// Isotropic flow in an annulus against the exact solution.
    BenchAnnulus {
        /// Radius ratio `a/R` of the annulus.
        #[arg(long)]
        lambda: f64,
        /// Cells per axis.
        #[arg(long, default_value_t = 48)]
        cells: usize,
    },
    /// Prints the default configuration.
    PrintDefaults,
}

fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::Argument(format!("expected g1:g2, got {s:?}")))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| CliError::Argument(format!("{t:?}: {e}")));
    Ok((p(a)?, p(b)?))
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { config } => {
            let c = ScenarioConfig::load(&config)?;
            let m = run::run_scenario(&c)?;
            print_json(&m)?;
            Ok(true)
        }
        Command::Sweep { config, gammas } => {
            let c = ScenarioConfig::load(&config)?;
            let pairs = gammas.iter().map(|s| parse_pair(s)).collect::<Result<Vec<_>>>()?;
            let rep = run::gamma_sweep(&c, &pairs)?;
            print_json(&rep)?;
            Ok(true)
        }
        Command::Validate => {
            let checks = validate::validate_suite()?;
            print_json(&checks)?;
            Ok(checks.iter().all(|c| c.pass))
        }
        Command::BenchAnnulus { lambda, cells } => {
            print_json(&run::bench_annulus(lambda, cells)?)?;
            Ok(true)
        }
        Command::PrintDefaults => {
            print_json(&ScenarioConfig::default())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
