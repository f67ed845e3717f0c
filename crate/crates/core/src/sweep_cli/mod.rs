//! Configuration, sweeps and file output behind the `jcbell` binary.

pub mod config;
pub mod emit;
pub mod report;
mod sweep;

pub use config::{AtomSpec, ExperimentConfig, InitialState, Output, TimeGrid};
pub use emit::{emit, format_g12, parse_csv, parse_json, render, Format};
pub use sweep::{run_sweep, run_times, SweepRecord, SweepTable};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "JCBELL_THREADS";
