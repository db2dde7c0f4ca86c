//! Scenario runner for the `pseudoherm` simulator: INI scenarios and figure
//! presets, CSV/SVG/manifest output and the verification suite.

// `!(x > y)` is used on purpose so that NaN fails the guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;
pub mod verify;

pub use config::{preset, Scenario, PRESET_NAMES};
pub use error::CliError;
pub use pipeline::{run, RunResult, Table};

use std::path::{Path, PathBuf};

/// Runs a scenario and writes its files into `dir`.
pub fn run_to_dir(sc: &Scenario, dir: &Path, svg: bool) -> Result<(RunResult, Vec<PathBuf>), CliError> {
    let res = run(sc)?;
    let files = output::render(&res, &res.table, svg)?;
    let paths = output::write_files(dir, &files)?;
    Ok((res, paths))
}

/// Worker count for `figures`: `PSEUDOHERM_THREADS` when set to a positive
/// integer, otherwise the number of available cores.
pub fn thread_count() -> usize {
    std::env::var("PSEUDOHERM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}
