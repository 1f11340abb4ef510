//! `cusplab` command-line driver.
//!
//! Exit codes: 0 success, 1 a verify check failed, 2 configuration or I/O
//! error, 3 numeric-range error or propagation warnings under `--strict`.
//!
//! `CUSPLAB_THREADS` caps the number of worker threads used by `verify`.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cusplab::Error;

use commands::{Ctx, Outcome};
use config::{RunConfig, Scenario};

#[derive(Parser)]
#[command(name = "cusplab", version, about = "Short-time cusp dynamics: figures, checks, propagation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; unknown keys are rejected.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `outputs` in the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Treat propagation warnings as errors.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and TE densities of the vaporized-nucleus state.
    Figure1,
    /// Run registered numerical checks and print a JSON report.
    Verify {
        /// Run only this check.
        #[arg(long)]
        check: Option<String>,
        /// List the registry as a markdown table and exit.
        #[arg(long)]
        list: bool,
    },
    /// Crank–Nicolson propagation of the configured scenario.
    Propagate,
    /// Dump TE terms and asymptotic coefficients.
    Series,
    /// Borel-resum an asymptotic coefficient file.
    Borel {
        /// Coefficient JSON, as written by `series`.
        file: Option<PathBuf>,
    },
}

fn threads() -> Result<usize, Error> {
    match std::env::var("CUSPLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::Config(format!("CUSPLAB_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default_for(Scenario::FreeVaporized),
    };
    let mut ctx = Ctx { config, out: cli.out, strict: cli.strict, check: None, input: None, threads: threads()? };
    match cli.command {
        Command::Figure1 => commands::figure1(&ctx),
        Command::Verify { list: true, .. } => {
            print!("{}", cusplab::verify::registry_markdown());
            Ok(Outcome::Success)
        }
        Command::Verify { check, .. } => {
            ctx.check = check;
            commands::verify(&ctx)
        }
        Command::Propagate => commands::propagate(&ctx),
        Command::Series => commands::series(&ctx),
        Command::Borel { file } => {
            ctx.input = file;
            commands::borel(&ctx)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Ok(Outcome::Warnings) => {
            eprintln!("error: propagation warnings with --strict");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 3 } else { 2 })
        }
    }
}
