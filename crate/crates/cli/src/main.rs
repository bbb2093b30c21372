//! `netform`: run best-response dynamics, check stability and sweep `gamma`.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use netform_core::ScanOrder;

#[derive(Parser)]
#[command(
    name = "netform",
    version,
    about = "Multi-interface IoT network-formation simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run best-response dynamics from the empty topology and write artifacts.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, env = "NETFORM_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "NETFORM_OUT", default_value = "netform-out")]
        out: PathBuf,
        #[command(flatten)]
        dynamics: DynamicsArgs,
    },
    /// Check whether a topology is pairwise stable.
    Check {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        topology: PathBuf,
        /// Also write the stability report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One dynamics run per (gamma, seed), summarised as CSV.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        /// Inclusive range `A:B:STEP`, or a single value.
        #[arg(long)]
        gamma: commands::GammaRange,
        /// Number of consecutive seeds per gamma.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// First seed.
        #[arg(long, env = "NETFORM_SEED", default_value_t = 0)]
        seed: u64,
        /// Directory for `sweep.csv` and one artifact directory per run;
        /// without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        dynamics: DynamicsArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct DynamicsArgs {
    #[arg(long, env = "NETFORM_SCAN_ORDER", default_value = "shuffled")]
    scan_order: ScanOrder,
    #[arg(long, env = "NETFORM_MAX_STEPS", default_value_t = 10_000)]
    max_steps: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            seed,
            out,
            dynamics,
        } => commands::run(
            &scenario,
            seed,
            dynamics.scan_order,
            dynamics.max_steps,
            &out,
        ),
        Command::Check {
            scenario,
            topology,
            out,
        } => commands::check(&scenario, &topology, out.as_deref()),
        Command::Sweep {
            scenario,
            gamma,
            seeds,
            seed,
            out,
            dynamics,
        } => commands::sweep(
            &scenario,
            &gamma,
            seed..seed + seeds,
            dynamics.scan_order,
            dynamics.max_steps,
            out.as_deref(),
        ),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            commands::report_error(&err);
            ExitCode::from(1)
        }
    }
}
