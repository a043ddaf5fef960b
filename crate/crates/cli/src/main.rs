use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use sqbath_cli::config::load_config;
use sqbath_cli::sweep::{run_sweep, SweepAxis};
use sqbath_cli::CliError;

/// Simulate a single-mode cavity field damped by a squeezed vacuum
/// reservoir with a time-dependent coupling rate.
#[derive(Parser)]
#[command(name = "sqbath", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one run described by a TOML config file.
    Run {
        /// Path to the run configuration.
        config: PathBuf,
        /// Parse and validate the config, then exit without computing.
        #[arg(long)]
        validate_only: bool,
    },
    /// Run the config once per value of a swept scalar field.
    Sweep {
        /// Path to the base run configuration.
        config: PathBuf,
        /// Field to sweep: r, gamma0, n_bar, or dim.
        #[arg(long)]
        axis: String,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',')]
        values: Vec<String>,
        /// Parse and validate the config and axis, then exit.
        #[arg(long)]
        validate_only: bool,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, validate_only } => {
            let cfg = load_config(&config)?;
            if validate_only {
                println!("configuration ok: dim={}, method={}", cfg.dim, cfg.method.name());
                return Ok(());
            }
            let outcome = sqbath_cli::run::execute(&cfg)?;
            println!(
                "run complete: {} samples, final fidelity to steady state {:.12}",
                outcome.rows.len(),
                outcome.final_fidelity_steady
            );
            println!(
                "wrote {} and {}",
                cfg.outputs.trajectory_path.display(),
                cfg.outputs.diagnostics_path.display()
            );
            Ok(())
        }
        Command::Sweep { config, axis, values, validate_only } => {
            let cfg = load_config(&config)?;
            let axis = SweepAxis::parse(&axis)?;
            if values.iter().all(|v| v.trim().is_empty()) {
                return Err(CliError::Validation("sweep requires at least one axis value".into()));
            }
            if validate_only {
                println!(
                    "configuration ok: dim={}, sweep axis {} over {} values",
                    cfg.dim,
                    axis.name(),
                    values.len()
                );
                return Ok(());
            }
            let outcome = run_sweep(&cfg, axis, &values)?;
            for point in &outcome.points {
                match &point.result {
                    Ok(o) => println!(
                        "sweep {}={}: ok (final fidelity {:.9})",
                        axis.name(),
                        point.value,
                        o.final_fidelity_steady
                    ),
                    Err(e) => println!("sweep {}={}: {e}", axis.name(), point.value),
                }
            }
            println!("summary written to {}", outcome.summary_path.display());
            if outcome.all_ok() {
                Ok(())
            } else {
                Err(CliError::Runtime("one or more sweep points failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
