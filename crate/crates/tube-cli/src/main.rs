use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tube_cli::{plot_command, run_command, Overrides};

/// Metric reconstruction from a unit-distance oracle.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the scenario described by a key=value config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Export plot data (tape, scissors, error_curve) from a report as CSV.
    Plot {
        report: PathBuf,
        what: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let code = match Cli::parse().cmd {
        Cmd::Run { config, seed, tolerance, out_dir } => run_command(&config, &Overrides { seed, tolerance, out_dir }),
        Cmd::Plot { report, what, out_dir } => plot_command(&report, &what, out_dir),
    };
    ExitCode::from(code)
}
