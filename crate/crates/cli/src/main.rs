//! ghost-scaler: stochastic and semiclassical analysis of slowing-down
//! transients near a saddle-node bifurcation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ghost_cli::commands::{figures, models, scaling, ssa, wkb};
use ghost_cli::config::{load_config, resolve_threads, FileConfig};
use ghost_cli::CliError;

#[derive(Parser)]
#[command(
    name = "ghost-scaler",
    version,
    about = "Extinction-time and flight-time scaling near a saddle-node bifurcation",
    long_about = "Cross-validates exact stochastic simulation of birth-death models against \
the semiclassical Hamiltonian picture: extinction-time sweeps, orbit flight times, action \
weights and the scaling laws of both. All randomized runs are seeded and reproducible; \
outputs are CSV/JSON with a manifest per run."
)]
struct Cli {
    /// key = value config file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (also GHOST_SCALER_THREADS); default: machine parallelism
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the bundled birth-death models
    Models {
        #[command(subcommand)]
        cmd: models::ModelsCmd,
    },
    /// Exact stochastic simulation: sweeps and the stochastic bifurcation
    Ssa {
        #[command(subcommand)]
        cmd: ssa::SsaCmd,
    },
    /// Semiclassical Hamiltonian: orbits, phase curves, weights
    Wkb {
        #[command(subcommand)]
        cmd: wkb::WkbCmd,
    },
    /// Scaling analysis: flight sweeps, slope fits, data collapse
    Scaling {
        #[command(subcommand)]
        cmd: scaling::ScalingCmd,
    },
    /// Plot-ready data bundles
    Figures {
        #[command(subcommand)]
        cmd: figures::FiguresCmd,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ghost-scaler: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(path) => load_config(path)?,
        None => FileConfig::default(),
    };
    let threads = resolve_threads(cli.threads, file.threads);
    match &cli.command {
        Command::Models { cmd } => models::run(cmd, &file),
        Command::Ssa { cmd } => ssa::run(cmd, &file, threads),
        Command::Wkb { cmd } => wkb::run(cmd, &file),
        Command::Scaling { cmd } => scaling::run(cmd, &file, threads),
        Command::Figures { cmd } => figures::run(cmd, &file, threads),
    }
}
