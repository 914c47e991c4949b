//! Config-driven runner for the slowdec experiments and the acceptance checklist.

pub mod acceptance;
pub mod config;
pub mod output;
pub mod runner;

pub use config::{Experiment, RunConfig};
pub use runner::{execute, run_file, CliError, Overrides, RunSummary};
