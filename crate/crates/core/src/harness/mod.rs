//! Config files, seeded Monte Carlo sweeps, CSV output and summaries.

mod config;
mod seeds;
mod summary;
mod sweep;

use thiserror::Error;

pub use config::{
    config_reference, load_config, parse_config, Algorithm, ScenarioPoint, ScenarioSweep,
};
pub use seeds::{algorithm_seed, channel_seed, derive_seed, splitmix64};
pub use summary::{format_summary, read_records, read_records_from, summarize, SummaryRow};
pub use sweep::{run_sweep, run_sweep_to_file, write_records, RunOptions, RunRecord, CSV_COLUMNS};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("CSV schema mismatch: {0}")]
    Schema(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
