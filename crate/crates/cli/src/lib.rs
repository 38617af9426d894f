//! Command-line front end: flag and config-file ingestion, solver dispatch,
//! CSV and plotting-script output.
//!
//! Exit codes: 0 on success, 1 on input or parse errors, 2 on solver
//! failures and on failed verification checks. On any error no output file
//! is created or modified.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::config::{CommandName, RunConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_SOLVER: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "antilinear", version, about = "Solvers for u' = f conj(u) + g and its reductions")]
pub struct Cli {
    /// Command; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<CommandName>,
    /// JSON config whose keys are the long flag names; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub options: RunConfig,
}

/// Why a run stopped.
#[derive(Debug)]
pub enum Failure {
    Input(anyhow::Error),
    Solver(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Solver(_) => EXIT_SOLVER,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Input(e) | Failure::Solver(e) => e,
        }
    }
}

/// Config file overlaid by flags.
pub fn resolve(cli: Cli) -> Result<RunConfig, Failure> {
    let mut flags = cli.options;
    flags.command = cli.command;
    let base = match &cli.config {
        Some(path) => config::load(path).map_err(Failure::Input)?,
        None => RunConfig::default(),
    };
    Ok(base.overlay(flags))
}

/// Runs the whole pipeline for one configuration and writes its outputs.
pub fn run_config(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    let report = match commands::execute(cfg) {
        Ok(report) => report,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {:#}", failure.error());
            return failure.exit_code();
        }
    };
    if let Err(e) = output::write_all(&report.files) {
        let _ = writeln!(stderr, "error: {e:#}");
        return EXIT_INPUT;
    }
    for note in &report.notes {
        let _ = writeln!(stderr, "{note}");
    }
    if let Err(e) = stdout.write_all(report.stdout.as_bytes()).and_then(|_| stdout.flush()) {
        let _ = writeln!(stderr, "error: cannot write to standard output: {e}");
        return EXIT_INPUT;
    }
    if report.failed_checks {
        EXIT_SOLVER
    } else {
        EXIT_OK
    }
}

/// Entry point used by the binary, with `argv[0]` first.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{text}");
                EXIT_OK
            };
        }
    };
    match resolve(cli) {
        Ok(cfg) => run_config(&cfg, stdout, stderr),
        Err(failure) => {
            let _ = writeln!(stderr, "error: {:#}", failure.error());
            failure.exit_code()
        }
    }
}
