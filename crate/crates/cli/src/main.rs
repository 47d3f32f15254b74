//! `ringwalk`: run ring-resonator quantum-walk scenarios from a TOML
//! config, list the registered scenarios, or verify core invariants.

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use ringwalk_cli::{run_scenario, verify_checks, ScenarioConfig, SCENARIOS};

#[derive(Parser)]
#[command(name = "ringwalk", about = "Ring-resonator quantum walk simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario described by a TOML config file.
    Run {
        /// Path to the scenario config.
        config: PathBuf,
    },
    /// List all registered scenarios.
    ListScenarios,
    /// Run the built-in invariant checks.
    Verify,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config } => {
            let cfg = match ScenarioConfig::load(&config) {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e:#}");
                    return ExitCode::FAILURE;
                }
            };
            match run_scenario(&cfg) {
                Ok(files) => {
                    for f in files {
                        println!("{}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e:#}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::ListScenarios => {
            for s in SCENARIOS {
                println!("{:<20} {}", s.name, s.description);
            }
            ExitCode::SUCCESS
        }
        Command::Verify => {
            let mut all_ok = true;
            for (name, ok) in verify_checks() {
                println!("{}: {name}", if ok { "ok  " } else { "FAIL" });
                all_ok &= ok;
            }
            if all_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: one or more invariant checks failed");
                ExitCode::FAILURE
            }
        }
    }
}
