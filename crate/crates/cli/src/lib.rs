//! Command-line harness for the staircase verification suites.
//!
//! The binary `staircase` exposes four commands. `verify` runs the seeded
//! identity suites. `ili-or` checks the closed form of `I L I or`.
//! `primitive` builds and checks the staircase primitive of a cocycle.
//! `convergence` writes a refinement ladder as CSV. Reports are JSON
//! documents with a versioned layout, see [`commands::ReportDocument`].

pub mod commands;
pub mod config;
pub mod error;

use std::fs::File;
use std::io::Write;
use std::path::Path;

pub use config::{Cocycle, RunConfig};
pub use error::{CliError, Result, EXIT_CONFIG, EXIT_FAILURE, EXIT_OK};

use commands::{ReportDocument, Target};

/// A parsed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// `verify <suite|all>`.
    Verify(String),
    /// `ili-or`.
    IliOr,
    /// `primitive <cocycle>`.
    Primitive(String),
    /// `convergence <target>`.
    Convergence(String),
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn emit_document(doc: &ReportDocument, cfg: &RunConfig) -> Result<i32> {
    let json = doc.to_json()?;
    match &cfg.output_path {
        Some(path) => create(path)?.write_all(json.as_bytes()).map_err(|source| CliError::Io { path: path.clone(), source })?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    for r in &doc.reports {
        let verdict = if r.within_budget() { "PASS" } else { "FAIL" };
        let budget = r.budget.map_or("none".to_string(), |b| format!("{b:e}"));
        eprintln!("{verdict} {} sup {:e} budget {budget}", r.identity_name, r.sup_residual);
    }
    Ok(if doc.passed() { EXIT_OK } else { EXIT_FAILURE })
}

/// Runs `command` under `cfg`, writes its outputs and returns the exit code.
pub fn run(command: &Command, cfg: &RunConfig) -> Result<i32> {
    match command {
        Command::Verify(suite) => emit_document(&commands::verify(suite, cfg)?, cfg),
        Command::IliOr => emit_document(&commands::ili_or(cfg)?, cfg),
        Command::Primitive(name) => {
            let run = commands::primitive(Cocycle::from_name(name)?, cfg)?;
            if let Some(path) = &cfg.csv_path {
                commands::write_primitive_csv(&run.samples, create(path)?)?;
            }
            emit_document(&run.document, cfg)
        }
        Command::Convergence(name) => {
            let rows = commands::convergence(Target::from_name(name)?, cfg)?;
            match &cfg.output_path {
                Some(path) => commands::write_ladder_csv(&rows, create(path)?)?,
                None => commands::write_ladder_csv(&rows, std::io::stdout().lock())?,
            }
            Ok(EXIT_OK)
        }
    }
}
