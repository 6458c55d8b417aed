use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};

use hebbench::config::{Experiment, SweepConfig};
use hebbench::runner::{run, RunOptions};

#[derive(Parser)]
#[command(
    name = "hebbench",
    version,
    about = "Benchmark harness for local learning rules in binary attractor networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Each subcommand runs one experiment kind; the config file must declare
/// the same experiment, so a sweep cannot silently run under the wrong
/// label.
#[derive(Subcommand)]
enum Command {
    /// Single-pattern storage capacity sweep
    Capacity(RunArgs),
    /// Prototype-extraction capacity sweep
    Prototype(RunArgs),
    /// Capacity under correlated data, with resistance indices
    Correlation(RunArgs),
    /// Information per synapse over an explicit load grid
    Weightinfo(RunArgs),
    /// Capacity over a size grid, with the scaling-coefficient fit
    Fit(RunArgs),
    /// Join sweep outputs into the normalized score table
    Score(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Sweep configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory (overrides the config)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Base seed (overrides the config)
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Per-cell progress on stderr
    #[arg(long)]
    verbose: bool,
}

fn main() -> ExitCode {
    match try_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn try_main() -> Result<()> {
    let cli = Cli::parse();
    let (expected, args) = match &cli.command {
        Command::Capacity(a) => (Experiment::Capacity, a),
        Command::Prototype(a) => (Experiment::Prototype, a),
        Command::Correlation(a) => (Experiment::Correlation, a),
        Command::Weightinfo(a) => (Experiment::WeightInfo, a),
        Command::Fit(a) => (Experiment::Fit, a),
        Command::Score(a) => (Experiment::Score, a),
    };
    let cfg = SweepConfig::load(&args.config)?;
    if cfg.experiment != expected {
        bail!(
            "config {} declares experiment \"{}\" but the subcommand is \"{}\"",
            args.config.display(),
            cfg.experiment.name(),
            expected.name()
        );
    }
    run(
        &cfg,
        &RunOptions {
            out: args.out.clone(),
            seed: args.seed,
            threads: args.threads,
            verbose: args.verbose,
        },
    )?;
    Ok(())
}
