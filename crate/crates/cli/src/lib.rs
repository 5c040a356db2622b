//! `lfref` command-line pipeline: view import, refocusing, label and patch
//! generation, quality reports and timing.
//!
//! Exit codes: 0 success, 2 usage error, 3 input error (unreadable, malformed
//! or misaligned inputs), 4 processing failure (including any failed entry of a
//! `labels` run).

pub mod args;
pub mod cmd;
pub mod error;
pub mod manifest;

use args::{Cli, Command};
use error::{CliError, CliResult};

/// Sizes the global worker pool from `LFREF_THREADS` when set.
pub fn init_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("LFREF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::usage(format!("LFREF_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(CliError::processing)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Import(a) => cmd::import::run(a),
        Command::Refocus(a) => cmd::refocus::run(a),
        Command::Labels(a) => cmd::labels::run(a),
        Command::Patches(a) => cmd::patches::run(a),
        Command::Metrics(a) => cmd::metrics::run(a),
        Command::Loss(a) => cmd::loss::run(a),
        Command::Bench(a) => cmd::bench::run(a),
    }
}
