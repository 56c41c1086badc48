mod commands;
mod config;
mod error;
mod report;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{Format, Output, VerifyArgs};
use crate::config::{load_config, parse_epsilon, parse_mode, RunConfig};
use crate::error::{CliError, CliResult};

/// Exact simulation of fault-tolerant rendezvous on a line.
#[derive(Debug, Parser)]
#[command(name = "byzline", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a plan and print trajectories (CSV by default).
    Simulate(ConfigArgs),
    /// Worst-case competitive ratio over all fault sets, as a JSON report.
    Evaluate(ConfigArgs),
    /// Run the built-in acceptance suite.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Density of the FRR grid.
        #[arg(long)]
        grid: Option<u32>,
        /// Small sample sizes, for smoke testing.
        #[arg(long)]
        quick: bool,
    },
    /// FRR worst-case ratio over the normalized domain grid, as CSV.
    Sweep {
        #[arg(long, default_value_t = 40)]
        grid: u32,
    },
    /// Space-time SVG diagram of a plan.
    Plot(ConfigArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// JSON run config, or `-` for stdin.
    config: PathBuf,

    /// Override the config's fault enumeration: exactly or at-most.
    #[arg(long)]
    mode: Option<String>,

    /// Override the config's epsilon.
    #[arg(long)]
    epsilon: Option<String>,
}

impl ConfigArgs {
    fn load(&self) -> CliResult<RunConfig> {
        let mut cfg = load_config(&self.config)?;
        if let Some(m) = &self.mode {
            cfg.request.mode = parse_mode(m)?;
        }
        if let Some(e) = &self.epsilon {
            cfg.epsilon = Some(parse_epsilon(e)?);
        }
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> CliResult<Output> {
    let format = cli.format;
    match &cli.command {
        Command::Simulate(a) => commands::simulate(&a.load()?, format),
        Command::Evaluate(a) => commands::evaluate(&a.load()?, format),
        Command::Verify { seed, grid, quick } => {
            commands::verify(&VerifyArgs { seed: *seed, grid: *grid, quick: *quick }, format)
        }
        Command::Sweep { grid } => commands::sweep(*grid, format),
        Command::Plot(a) => commands::plot(&a.load()?, format),
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        match out.failure {
            Some(why) => Err(CliError::Verification(why)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("byzline: {e}");
            e.exit_code()
        }
    }
}
