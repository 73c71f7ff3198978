//! `polyembed`: build maps, verify them, plan Theorem 1 chains, draw figures.
//!
//! Exit status: 0 when everything requested passes, 1 when a check or claim
//! fails, 2 on usage errors (bad flags or literals, missing files, violated
//! construction hypotheses).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Format, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

/// Construction errors from the core library are usage errors here.
impl From<polyembed::Error> for CliError {
    fn from(e: polyembed::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "polyembed", version, about = "Explicit symplectic embeddings of polydisks")]
struct Cli {
    /// Output directory [default: $POLYDISK_OUT, else ./polydisk-out].
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// TOML run configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a map descriptor.
    Build(commands::build::BuildArgs),
    /// Run numerical checks on a map descriptor.
    Verify(commands::verify::VerifyArgs),
    /// Plan a Theorem 1 claim chain, or validate a certificate.
    Plan(commands::plan::PlanArgs),
    /// Emit sampled point clouds as CSV (and optionally SVG).
    Figure(commands::figure::FigureArgs),
    /// Run the standard verification suite, or render a saved report.
    Report(commands::report::ReportArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Build(_) => "build",
            Command::Verify(_) => "verify",
            Command::Plan(_) => "plan",
            Command::Figure(_) => "figure",
            Command::Report(_) => "report",
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    cfg.command = cli.command.name().to_string();
    if cli.out.is_some() {
        cfg.out = cli.out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(format) = cli.format {
        cfg.format = format;
    }
    match cli.command {
        Command::Build(a) => commands::build::run(&cfg, a),
        Command::Verify(a) => commands::verify::run(&mut cfg, a),
        Command::Plan(a) => commands::plan::run(&cfg, a),
        Command::Figure(a) => commands::figure::run(&mut cfg, a),
        Command::Report(a) => commands::report::run(&mut cfg, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
