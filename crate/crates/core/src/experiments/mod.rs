//! Reproducible numerical studies: the worked qubit example, the qudit
//! fidelity sweep, capacity scans and the adaptive GEVP demo.
//!
//! Every stochastic step draws from a stream derived from
//! `(master_seed, d, trial)`, so results do not depend on thread count.

mod adaptive;
mod capacity;
pub mod io;
mod qubit;
mod sweep;

pub use adaptive::{run_adaptive_demo, AdaptiveDemoConfig, AdaptiveDemoReport, TrueStateKind};
pub use capacity::{run_capacity_scan, CapacityConfig, CapacityRecord, StateKind};
pub use qubit::{run_qubit_example, QubitExampleReport, QubitRow};
pub use sweep::{
    compare_with_table1, run_qudit_sweep, summarize, SweepConfig, SweepOutput, SweepRecord, SweepSummary,
    Table1Row, DimensionSummary, TABLE1, SWEEP_METRICS,
};

use crate::error::{Error, Result};

/// Default sweep dimensions.
pub const DEFAULT_DIMS: [usize; 8] = [2, 3, 4, 5, 7, 8, 11, 13];

/// Runs `f` inside a dedicated pool of `threads` workers, or the global pool for `None`.
pub(crate) fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::invalid("thread count must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}
