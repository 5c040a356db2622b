use lfref_core::import::{import_views, read_view_manifest};
use lfref_core::io::save_lf;
use lfref_core::center_crop;

use crate::args::ImportArgs;
use crate::error::{Classify, CliResult};

pub fn run(args: &ImportArgs) -> CliResult<()> {
    let manifest = args.manifest.clone().unwrap_or_else(|| args.dir.join("views.json"));
    let entries = read_view_manifest(&manifest).input()?;
    let mut lf = import_views(&args.dir, &entries, args.grid).input()?;
    if let Some(target) = args.crop {
        lf = center_crop(&lf, target).input()?;
    }
    save_lf(&lf, &args.out).processing()?;
    log::info!("{} -> {}", lf.dims(), args.out.display());
    Ok(())
}
