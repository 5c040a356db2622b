use std::path::{Path, PathBuf};

use lfref_core::bench::{ratios, ratios_csv, records_csv, run_bench, BenchConfig, BenchMethod};

use super::write_text;
use crate::args::BenchArgs;
use crate::error::{Classify, CliError, CliResult};

pub fn ratios_path(out: &Path) -> PathBuf {
    out.with_extension("ratios.csv")
}

pub fn run(args: &BenchArgs) -> CliResult<()> {
    if args.reps < 3 {
        return Err(CliError::usage(format!("--reps must be at least 3, got {}", args.reps)));
    }
    let cfg = BenchConfig {
        sizes: args.sizes.clone(),
        alphas: args.alphas.clone(),
        reps: args.reps,
        seed: args.seed,
        methods: BenchMethod::ALL.to_vec(),
        threads: None,
    };
    let records = run_bench(&cfg).processing()?;
    let rat = ratios(&records);
    write_text(&args.out, &records_csv(&records))?;
    write_text(&ratios_path(&args.out), &ratios_csv(&rat))?;
    for r in &rat {
        log::info!(
            "{}: pre/slice {:.1}, shift/slice {:.1}",
            r.dims,
            r.pre_over_slice.unwrap_or(f64::NAN),
            r.shift_over_slice.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
