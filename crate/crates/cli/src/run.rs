//! Sweep execution on a thread pool. Scheduling never leaks into the
//! output: rows are assembled in row-major grid order regardless of worker
//! count, so reruns are byte-identical.

use std::path::PathBuf;

use anyhow::Context;
use opdc_core::sweep::{run_row, PointRecord, SweepError, SweepSpec};
use rayon::prelude::*;

/// Name of the environment variable holding the default output directory.
pub const OUT_DIR_ENV: &str = "OPDC_OUT_DIR";

/// Evaluate the whole grid, failing fast on the first bad point. `workers`
/// picks the pool size; `None` uses the global default (one thread per core).
pub fn run_sweep_parallel(
    spec: &SweepSpec,
    workers: Option<usize>,
) -> anyhow::Result<Vec<PointRecord>> {
    spec.validate()?;
    let eval = || -> Result<Vec<Vec<PointRecord>>, SweepError> {
        (0..spec.point_count())
            .into_par_iter()
            .map(|flat| run_row(spec, flat))
            .collect()
    };
    let nested = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .context("building worker pool")?
            .install(eval),
        None => eval(),
    }?;
    Ok(nested.into_iter().flatten().collect())
}

/// Where to write: an explicit path wins; otherwise `default_name` lands in
/// `$OPDC_OUT_DIR` when set and non-empty, else in the working directory.
pub fn resolve_out_path(explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
    if let Some(path) = explicit {
        return path;
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(default_name),
        _ => PathBuf::from(default_name),
    }
}
