//! `staircase`: command-line front end of the verification suites and of the
//! staircase primitive.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use staircase_cli::{run, CliError, Command, RunConfig};

/// Numerical verification of the staircase operator calculus.
#[derive(Debug, Parser)]
#[command(name = "staircase", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed of every sample sequence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample points per identity.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Output path for the JSON report or the CSV ladder.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Run one suite (group, contraction, commutators, cup, solvers, staircase) or all.
    Verify {
        /// Suite name or `all`.
        suite: String,
    },
    /// Check `I L I or(θ) = (i/π) e^{iθ}`.
    IliOr,
    /// Build and check the staircase primitive of `or_cup_or` or `or_cup_or_cup_or`.
    Primitive {
        /// Cocycle name.
        cocycle: String,
        /// Write one CSV row per sample: angles, p value, residual.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a convergence ladder (`contraction`, `ili_or`, `primitive`) as CSV.
    Convergence {
        /// Target name.
        target: String,
    },
}

fn configure(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(samples) = cli.samples {
        cfg.samples = samples;
    }
    if let Some(out) = &cli.out {
        cfg.output_path = Some(out.clone());
    }
    if let Cmd::Primitive { csv: Some(csv), .. } = &cli.command {
        cfg.csv_path = Some(csv.clone());
    }
    cfg.validate()?;
    Ok(cfg)
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("STAIRCASE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("STAIRCASE_THREADS = {value:?} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot start {threads} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match &cli.command {
        Cmd::Verify { suite } => Command::Verify(suite.clone()),
        Cmd::IliOr => Command::IliOr,
        Cmd::Primitive { cocycle, .. } => Command::Primitive(cocycle.clone()),
        Cmd::Convergence { target } => Command::Convergence(target.clone()),
    };
    let outcome = init_threads().and_then(|()| configure(&cli)).and_then(|cfg| run(&command, &cfg));
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
