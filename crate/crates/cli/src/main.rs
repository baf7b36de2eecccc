use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use clustergrid_cli::commands::{cmd_gate, cmd_run, cmd_summary, RunArgs};
use clustergrid_cli::serve::{cmd_serve, ServeArgs};
use clustergrid_cli::CliError;

/// Exhaustive grid search and triage reports for clustering hyperparameters.
#[derive(Debug, Parser)]
#[command(name = "clustergrid", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every candidate in a configuration and write the output tree.
    Run {
        /// Run configuration (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory; must be empty or absent unless --force.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Override the configuration's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Replace the artifacts of an earlier run in --out.
        #[arg(long)]
        force: bool,
    },
    /// Show gate outcomes for a finished run.
    Gate {
        #[arg(long = "run")]
        run_dir: PathBuf,
    },
    /// Show internal metrics, gate outcomes and triage decisions for a run.
    Summary {
        #[arg(long = "run")]
        run_dir: PathBuf,
    },
    /// Serve a run directory and the decisions endpoint over HTTP.
    Serve {
        #[arg(long = "run")]
        run_dir: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory holding the triage UI bundle (index.html and assets).
        #[arg(long)]
        ui: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result: Result<(), CliError> = match cli.command {
        Command::Run { config, out, jobs, seed, force } => {
            cmd_run(&RunArgs { config, out, jobs, seed, force }, &mut stdout).map(|_| ())
        }
        Command::Gate { run_dir } => cmd_gate(&run_dir, &mut stdout),
        Command::Summary { run_dir } => cmd_summary(&run_dir, &mut stdout),
        Command::Serve { run_dir, port, host, ui } => {
            drop(stdout);
            cmd_serve(&ServeArgs { run_dir, host, port, ui_dir: ui })
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
