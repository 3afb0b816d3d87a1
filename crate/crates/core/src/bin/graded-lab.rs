use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use graded_shift::report::{dims, run, RunConfig, RunOptions};

/// Graded shift experiments on quotients of weighted Hardy spaces.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config and write report.json, CSVs and summary.txt
    Run {
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Replaces the config seed for every randomized step
        #[arg(long)]
        seed_override: Option<u64>,
        /// Output directory (default: output_dir from the config)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a config without running it
    Validate { config: PathBuf },
    /// Print the Hilbert function of the configured ideal
    Dims { config: PathBuf },
}

fn load(path: &PathBuf) -> anyhow::Result<RunConfig> {
    RunConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            workers,
            seed_override,
            out,
        } => {
            let cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => return fail(e, 1),
            };
            let opts = RunOptions {
                workers,
                seed_override,
                out,
            };
            match run(&cfg, &opts) {
                Ok((report, dir)) => {
                    print!("{}", graded_shift::report::summary(&report));
                    println!("\nwrote {}", dir.display());
                    if report.failures() > 0 {
                        ExitCode::from(2)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(e.into(), 1),
            }
        }
        Command::Validate { config } => match load(&config).and_then(|c| Ok(c.validate()?)) {
            Ok(warnings) => {
                for w in warnings {
                    println!("warning: {w}");
                }
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e, 1),
        },
        Command::Dims { config } => match load(&config).and_then(|c| Ok(dims(&c)?)) {
            Ok(h) => {
                println!("{:>4} {:>10} {:>10} {:>10}", "n", "total", "ideal", "quotient");
                for r in &h.rows {
                    println!("{:>4} {:>10} {:>10} {:>10}", r.n, r.dim_total, r.dim_ideal, r.dim_complement);
                }
                if let Some(w) = h.warning {
                    println!("warning: {w}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(e, 1),
        },
    }
}

fn fail(e: anyhow::Error, code: u8) -> ExitCode {
    eprintln!("error: {e:#}");
    ExitCode::from(code)
}
