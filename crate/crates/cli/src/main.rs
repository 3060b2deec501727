//! `affine-sle`: null vectors, lattice identities and growth-process simulation.
//!
//! Exit codes: 0 solved / verified / martingale, 1 usage or runtime error,
//! 2 infeasible / refuted / not a martingale, 3 inconclusive.

mod common;
mod lattice;
mod nullvec;
mod report;
mod sde;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use common::{CliResult, Exit};
use report::{Outcome, Report};

#[derive(Debug, Parser, Serialize)]
#[command(name = "affine-sle", version, about = "Null vectors of affine sl_N modules and SLE-type growth processes")]
struct Cli {
    /// Leave wall time out of the report so identical runs give identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Null-vector candidates in Weyl modules.
    #[command(subcommand)]
    Nullvec(nullvec::NullvecCmd),
    /// Identities in the lattice realization.
    #[command(subcommand)]
    Lattice(lattice::LatticeCmd),
    /// Growth-process simulation.
    #[command(subcommand)]
    Sde(sde::SdeCmd),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Nullvec(c) => match c {
                nullvec::NullvecCmd::Solve { .. } => "nullvec solve",
                nullvec::NullvecCmd::Verify { .. } => "nullvec verify",
                nullvec::NullvecCmd::Scan { .. } => "nullvec scan",
                nullvec::NullvecCmd::Gram { .. } => "nullvec gram",
            },
            Command::Lattice(_) => "lattice verify",
            Command::Sde(c) => match c {
                sde::SdeCmd::Trace { .. } => "sde trace",
                sde::SdeCmd::Martingale { .. } => "sde martingale",
            },
        }
    }

    fn run(&self) -> CliResult<Outcome> {
        match self {
            Command::Nullvec(c) => nullvec::run(c),
            Command::Lattice(c) => lattice::run(c),
            Command::Sde(c) => sde::run(c),
        }
    }
}

fn emit(cli: &Cli, outcome: &Outcome, start: Instant) -> std::io::Result<()> {
    let report = Report {
        command: cli.command.name(),
        status: &outcome.status,
        exit_code: outcome.exit as u8,
        config: &cli.command,
        seed: outcome.seed,
        versions: report::versions(),
        wall_time_seconds: (!cli.no_timing).then(|| start.elapsed().as_secs_f64()),
        result: &outcome.result,
    };
    let mut text = serde_json::to_string_pretty(&report).map_err(std::io::Error::from)?;
    text.push('\n');
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(Exit::Usage as u8),
            };
        }
    };
    match cli.command.run() {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome, start) {
                eprintln!("error: {e}");
                return ExitCode::from(Exit::Usage as u8);
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(Exit::Usage as u8)
        }
    }
}
