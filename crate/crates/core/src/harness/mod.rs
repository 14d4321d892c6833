//! Verification sweeps, limit experiments and the transform benchmark behind the CLI.

pub mod bench;
pub mod config;
pub mod lower_bound;
pub mod report;
pub mod verify;

pub use bench::{bench_size, run_transform_bench, BenchRow};
pub use config::{default_bounds, BenchConfig, BoundSelection, LowerBoundConfig, RunConfig};
pub use lower_bound::{fitted_rate, run_lower_bound, LimitRow, LimitSeries, LimitTable};
pub use report::{write_bench, write_limits, write_report_csv, write_verification};
pub use verify::{run_verify, BoundSummary, ReportRow, Skipped, VerificationReport};

use crate::error::{Error, Result};

/// Runs `op` on a pool of `jobs` threads, or on the global pool when `None`.
pub(crate) fn with_jobs<T: Send>(jobs: Option<usize>, op: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => op(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(op),
    }
}
