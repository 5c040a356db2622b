use lfref_core::io::{load_lf, load_stack, save_lf, save_stack};
use lfref_core::{random_patch, PatchRecord};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{create_dir, write_json};
use crate::args::{PatchesArgs, SplitArg};
use crate::cmd::labels::label_file;
use crate::error::{Classify, CliError, CliResult};
use crate::manifest::{DatasetManifest, Split};

pub const INDEX_SCHEMA: &str = "lfref patches v1";

#[derive(Debug, Serialize)]
struct PatchIndex {
    schema: &'static str,
    seed: u64,
    size: usize,
    records: Vec<PatchEntry>,
}

#[derive(Debug, Serialize)]
struct PatchEntry {
    id: String,
    k: usize,
    origin: [usize; 2],
    lf: String,
    labels: String,
}

/// Seed of patch `k` of light field `id`, independent of manifest order.
pub fn patch_seed(seed: u64, id: &str, k: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((id.len() as u64).to_le_bytes());
    h.update(id.as_bytes());
    h.update((k as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

pub fn run(args: &PatchesArgs) -> CliResult<()> {
    let manifest = DatasetManifest::load(&args.manifest)?;
    let wanted = args.split.map(|s| match s {
        SplitArg::Train => Split::Train,
        SplitArg::Test => Split::Test,
    });
    let entries: Vec<_> = manifest
        .entries
        .iter()
        .filter(|e| wanted.is_none_or(|w| e.split == w))
        .collect();
    for e in &entries {
        if !args.labels.join(label_file(&e.id)).is_file() {
            return Err(CliError::input(format!(
                "no label stack for id {:?} in {}",
                e.id,
                args.labels.display()
            )));
        }
    }
    create_dir(&args.out_dir)?;

    let mut records = Vec::new();
    for e in entries {
        let lf = load_lf(&e.path).input()?;
        let labels = load_stack(args.labels.join(label_file(&e.id))).input()?;
        if labels.image_dims() != lf.dims().image_dims() {
            return Err(CliError::input(format!(
                "id {:?}: label images are {:?} but the light field is {}",
                e.id,
                labels.image_dims().as_array(),
                lf.dims()
            )));
        }
        for k in 0..args.count {
            let patch = random_patch(&lf, patch_seed(args.seed, &e.id, k), args.size).input()?;
            let record = PatchRecord::new(patch, &labels, e.id.clone()).input()?;
            let lf_name = format!("{}_{k}.lf.lfr", e.id);
            let labels_name = format!("{}_{k}.labels.lfr", e.id);
            save_lf(&record.lf_patch, args.out_dir.join(&lf_name)).processing()?;
            save_stack(&record.label_stack, args.out_dir.join(&labels_name)).processing()?;
            records.push(PatchEntry {
                id: record.source_id,
                k,
                origin: [record.crop_origin.0, record.crop_origin.1],
                lf: lf_name,
                labels: labels_name,
            });
        }
        log::info!("{}: {} patches", e.id, args.count);
    }
    write_json(
        &args.out_dir.join("patches.json"),
        &PatchIndex {
            schema: INDEX_SCHEMA,
            seed: args.seed,
            size: args.size,
            records,
        },
    )
}
