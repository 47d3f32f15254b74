//! Scenario runner library behind the `ringwalk` binary: TOML
//! configuration, a registry of canned simulation scenarios, and
//! deterministic CSV emission.

pub mod config;
pub mod emit;
pub mod scenarios;

pub use config::ScenarioConfig;
pub use emit::{emit_spectrum_csv, read_spectrum_csv};
pub use scenarios::{default_config, run_scenario, verify_checks, OUTPUT_DIR_ENV, SCENARIOS};
