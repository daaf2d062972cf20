//! Experiment registry, configuration, and table output for the `pseudospec` CLI.

pub mod config;
pub mod error;
pub mod experiment;
pub mod goldens;
pub mod output;
pub mod registry;
pub mod solve;

pub use config::{parse_config, ExperimentConfig};
pub use error::{HarnessError, Result};
pub use experiment::run_experiment;
pub use output::{emit_csv, ResultTable};
pub use registry::ExperimentId;

/// Environment variable with the worker-thread count of the experiment scheduler.
pub const THREADS_ENV: &str = "PSEUDOSPEC_THREADS";
