pub mod bench;
pub mod import;
pub mod labels;
pub mod loss;
pub mod metrics;
pub mod patches;
pub mod refocus;

use std::path::Path;

use lfref_core::fourier::{refocus_fourier, FourierParams};
use lfref_core::io::write_atomic;
use lfref_core::shift_sum::{focal_stack_shift_sum, ShiftSumParams};
use lfref_core::{FocalStack, LightField};

use crate::args::{Method, RefocusOptions};
use crate::error::{Classify, CliError, CliResult};

pub fn refocus_stack(lf: &LightField, opts: &RefocusOptions) -> lfref_core::Result<FocalStack> {
    match opts.method {
        Method::ShiftSum => {
            let params = ShiftSumParams {
                pixels_per_view: opts.kappa,
                boundary: opts.boundary.into(),
                ..ShiftSumParams::default()
            };
            focal_stack_shift_sum(lf, &opts.alphas, &params)
        }
        Method::Fourier => refocus_fourier(
            lf,
            &opts.alphas,
            &FourierParams {
                pixels_per_view: opts.kappa,
            },
        ),
    }
}

pub fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::processing(format!("{}: {e}", dir.display())))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    write_atomic(path, text.as_bytes()).processing()
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).processing()?;
    text.push('\n');
    write_text(path, &text)
}
