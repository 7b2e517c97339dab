//! Batch front door: parses a JSON job config, dispatches one command, and
//! writes machine-readable reports (`<prefix>.json`, plus `_sweep.csv` /
//! `_field.csv` where a command produces tables). The pipeline is
//! deterministic: identical configs produce byte-identical outputs.

pub mod config;
pub mod run;

pub use config::{Command, JobConfig};
pub use run::{run, write_report, Report};

/// Exit status contract: 0 success, 1 error, 2 certificate refusal.
pub fn exit_code(outcome: &Result<Report, leaky_gap_core::Error>) -> i32 {
    match outcome {
        Ok(report) => {
            if report.refused {
                2
            } else {
                0
            }
        }
        Err(_) => 1,
    }
}
