use std::path::Path;

use lfref_core::io::{load_lf, save_stack};
use serde::{Deserialize, Serialize};

use super::{create_dir, refocus_stack, write_json};
use crate::args::LabelsArgs;
use crate::error::{CliError, CliResult};
use crate::manifest::{DatasetManifest, Entry, Split};

pub const INDEX_SCHEMA: &str = "lfref labels v1";

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LabelIndex {
    pub schema: String,
    pub method: String,
    pub alphas: Vec<f64>,
    pub kappa: f64,
    pub entries: Vec<LabelEntry>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct LabelEntry {
    pub id: String,
    pub split: Split,
    /// Relative to the index file.
    pub labels: String,
}

pub fn label_file(id: &str) -> String {
    format!("{id}.lfr")
}

fn generate(entry: &Entry, args: &LabelsArgs, out: &Path) -> Result<(), String> {
    let lf = load_lf(&entry.path).map_err(|e| e.to_string())?;
    let stack = refocus_stack(&lf, &args.opts).map_err(|e| e.to_string())?;
    save_stack(&stack, out).map_err(|e| e.to_string())
}

pub fn run(args: &LabelsArgs) -> CliResult<()> {
    let manifest = DatasetManifest::load(&args.manifest)?;
    create_dir(&args.out_dir)?;
    let index_path = args.out_dir.join("index.json");
    let index = LabelIndex {
        schema: INDEX_SCHEMA.into(),
        method: args.opts.method.as_str().into(),
        alphas: args.opts.alphas.as_slice().to_vec(),
        kappa: args.opts.kappa,
        entries: Vec::new(),
    };
    // Existing outputs are only reused when they were made with the same settings.
    if let Ok(text) = std::fs::read_to_string(&index_path) {
        let prev: LabelIndex = serde_json::from_str(&text)
            .map_err(|e| CliError::input(format!("{}: {e}", index_path.display())))?;
        if (&prev.method, &prev.alphas, prev.kappa) != (&index.method, &index.alphas, index.kappa) {
            return Err(CliError::input(format!(
                "{} holds labels made with method {} and {} alphas; use a fresh directory",
                args.out_dir.display(),
                prev.method,
                prev.alphas.len()
            )));
        }
    }

    let mut index = index;
    let mut failed = Vec::new();
    for entry in &manifest.entries {
        let name = label_file(&entry.id);
        let out = args.out_dir.join(&name);
        if out.is_file() {
            log::info!("{}: exists, skipped", entry.id);
        } else {
            match generate(entry, args, &out) {
                Ok(()) => log::info!("{}: wrote {}", entry.id, out.display()),
                Err(e) => {
                    log::error!("{}: {e}", entry.id);
                    failed.push(entry.id.clone());
                    continue;
                }
            }
        }
        index.entries.push(LabelEntry {
            id: entry.id.clone(),
            split: entry.split,
            labels: name,
        });
    }
    write_json(&index_path, &index)?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::processing(format!(
            "{} of {} entries failed: {}",
            failed.len(),
            manifest.entries.len(),
            failed.join(", ")
        )))
    }
}
