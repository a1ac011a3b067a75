//! `twonov`: command-line laboratory for a two-component peakon
//! system. Subcommands share one TOML configuration format and write
//! every artifact under the directory named by `--out`.
//!
//! Exit codes: 0 success; 1 configuration or usage error (no output
//! files written for a rejected configuration); 2 solution blow-up
//! (partial outputs kept); 3 a run property failed (outputs kept).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod data;

#[derive(Parser)]
#[command(
    name = "twonov",
    version,
    about = "Pseudospectral laboratory for a two-component peakon system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Directory receiving every output file.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Configuration override as KEY=VALUE; repeatable, wins over the file.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured initial state; write diagnostics and snapshots.
    Simulate(CommonArgs),
    /// Compare a travelling-wave run against its translated profile.
    PeakonValidate(CommonArgs),
    /// Test a finished run against the integral form of the equations.
    WeakCheck(CommonArgs),
    /// Rerun from smoothed potentials across a ladder of widths.
    MollifyStudy(CommonArgs),
    /// Measure separation growth between a run and perturbed copies.
    Depend(CommonArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // first line only: one machine-readable diagnostic per failure
            let rendered = e.to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            eprintln!("{first}");
            return ExitCode::from(1);
        }
    };

    let result = match &cli.command {
        Command::Simulate(a) => commands::simulate(&a.config, &a.out, &a.overrides),
        Command::PeakonValidate(a) => commands::peakon_validate(&a.config, &a.out, &a.overrides),
        Command::WeakCheck(a) => commands::weak_check(&a.config, &a.out, &a.overrides),
        Command::MollifyStudy(a) => commands::mollify_study(&a.config, &a.out, &a.overrides),
        Command::Depend(a) => commands::depend(&a.config, &a.out, &a.overrides),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
