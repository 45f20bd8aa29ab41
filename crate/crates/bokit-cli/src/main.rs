//! `bokit` command line: run determinant-identity checks from a JSON
//! config and write a CSV report.
//!
//! Exit codes: 0 when every relative residual stays within the configured
//! tolerance, 1 on tolerance failures or recorded check errors, 2 on
//! structural problems (unreadable config, schema violations, IO).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bokit", version, about = "Toeplitz determinant identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks described by a config file.
    Verify {
        /// Path to the JSON run configuration.
        config: PathBuf,
        /// Override the config's CSV output path.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Re-seed the random symbol families.
        #[arg(long)]
        seed: Option<u64>,
        /// Suppress per-row summary lines.
        #[arg(long)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify {
            config,
            output,
            seed,
            quiet,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(text) => text,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", config.display());
                    return ExitCode::from(2);
                }
            };
            let mut run_config = match bokit::parse_config(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if let Some(path) = output {
                run_config.output = path;
            }
            if let Some(seed) = seed {
                run_config.override_seed(seed);
            }
            match bokit::runner::run(&run_config, quiet) {
                Ok(summary) => ExitCode::from(summary.exit_code as u8),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}
