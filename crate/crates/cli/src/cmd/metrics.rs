use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lfref_core::io::load_stack;
use lfref_core::metrics::{fmt_sig9, stack_report, PsnrParams, QualityReport, SsimParams};
use rayon::prelude::*;

use super::{create_dir, write_text};
use crate::args::MetricsArgs;
use crate::error::{Classify, CliError, CliResult};

pub const SUMMARY_SCHEMA: &str = "# lfref metrics v1";

/// Ids of the `<id>.lfr` files in `dir`.
fn stack_ids(dir: &Path) -> CliResult<BTreeSet<String>> {
    let read = std::fs::read_dir(dir).map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
    let mut ids = BTreeSet::new();
    for entry in read {
        let path = entry.map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "lfr") {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                ids.insert(stem.to_owned());
            }
        }
    }
    Ok(ids)
}

pub fn details_dir(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".details");
    PathBuf::from(name)
}

pub fn summary_csv(rows: &[(String, QualityReport)]) -> String {
    let mut out = String::new();
    writeln!(out, "{SUMMARY_SCHEMA}").unwrap();
    writeln!(out, "id,mpsnr,mssim").unwrap();
    for (id, r) in rows {
        writeln!(out, "{id},{},{}", fmt_sig9(r.mpsnr), fmt_sig9(r.mssim)).unwrap();
    }
    out
}

pub fn run(args: &MetricsArgs) -> CliResult<()> {
    let pred = stack_ids(&args.pred)?;
    let truth = stack_ids(&args.truth)?;
    let only_pred: Vec<_> = pred.difference(&truth).cloned().collect();
    let only_truth: Vec<_> = truth.difference(&pred).cloned().collect();
    if !only_pred.is_empty() || !only_truth.is_empty() {
        return Err(CliError::input(format!(
            "stacks missing from truth: [{}]; missing from pred: [{}]",
            only_pred.join(", "),
            only_truth.join(", ")
        )));
    }
    if truth.is_empty() {
        return Err(CliError::input(format!("no .lfr stacks in {}", args.truth.display())));
    }
    let ids: Vec<String> = truth.into_iter().collect();
    let rows = ids
        .par_iter()
        .map(|id| {
            let file = format!("{id}.lfr");
            let p = load_stack(args.pred.join(&file)).input()?;
            let t = load_stack(args.truth.join(&file)).input()?;
            let report = stack_report(&p, &t, &SsimParams::default(), &PsnrParams::default())
                .map_err(|e| CliError::input(format!("{id}: {e}")))?;
            Ok((id.clone(), report))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let details = details_dir(&args.out);
    create_dir(&details)?;
    for (id, r) in &rows {
        write_text(&details.join(format!("{id}.csv")), &r.to_csv())?;
    }
    write_text(&args.out, &summary_csv(&rows))?;
    log::info!("{} rows -> {}", rows.len(), args.out.display());
    Ok(())
}
