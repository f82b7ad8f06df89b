//! Batch driver: job configuration, pipeline runs over ω and report writers.

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod job;
pub mod report;

pub use config::{load_symbol, Direction, JobConfig, Sweep};
pub use diagnostics::{run_approx, run_norms, ApproxConfig, ApproxInput, NormsConfig};
pub use error::{exit, CliError, Result};
pub use job::{run_check, run_job, CheckReport, JobSummary};
