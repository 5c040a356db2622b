//! Assembling a light field from decoded sub-aperture view images.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use image::DynamicImage;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lightfield::{LfDims, LightField};

/// One manifest entry: the image file holding view `(u, v)`.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct ViewEntry {
    pub u: usize,
    pub v: usize,
    pub file: PathBuf,
}

pub fn read_view_manifest(path: &Path) -> Result<Vec<ViewEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))
}

/// Decoded view: samples scaled to `[0, 1]`, interleaved `(s, t, c)`.
struct View {
    rows: usize,
    cols: usize,
    channels: usize,
    samples: Vec<f32>,
}

fn decode(img: DynamicImage) -> View {
    let (cols, rows) = (img.width() as usize, img.height() as usize);
    // Integer formats are divided by their maximum code value.
    let (channels, samples): (usize, Vec<f32>) = match img {
        DynamicImage::ImageLuma8(b) => (1, b.into_raw().into_iter().map(|x| x as f32 / 255.0).collect()),
        DynamicImage::ImageLuma16(b) => (1, b.into_raw().into_iter().map(|x| x as f32 / 65535.0).collect()),
        DynamicImage::ImageLumaA8(_) | DynamicImage::ImageLumaA16(_) => {
            let b = img.to_luma16();
            (1, b.into_raw().into_iter().map(|x| x as f32 / 65535.0).collect())
        }
        DynamicImage::ImageRgb8(b) => (3, b.into_raw().into_iter().map(|x| x as f32 / 255.0).collect()),
        DynamicImage::ImageRgba8(_) => {
            let b = img.to_rgb8();
            (3, b.into_raw().into_iter().map(|x| x as f32 / 255.0).collect())
        }
        DynamicImage::ImageRgb16(b) => (3, b.into_raw().into_iter().map(|x| x as f32 / 65535.0).collect()),
        DynamicImage::ImageRgba16(_) => {
            let b = img.to_rgb16();
            (3, b.into_raw().into_iter().map(|x| x as f32 / 65535.0).collect())
        }
        other => (3, other.to_rgb32f().into_raw()),
    };
    View {
        rows,
        cols,
        channels,
        samples,
    }
}

/// Builds a light field from the views listed in `entries`, paths relative to `dir`.
///
/// The angular grid is `grid` when given, otherwise the smallest grid holding
/// every listed index. Placement is by index, never by entry order. Samples are
/// clamped into `[0, 1]`.
pub fn import_views(dir: &Path, entries: &[ViewEntry], grid: Option<(usize, usize)>) -> Result<LightField> {
    if entries.is_empty() {
        return Err(Error::Manifest("no views listed".into()));
    }
    let (rows, cols) = grid.unwrap_or_else(|| {
        (
            entries.iter().map(|e| e.u).max().unwrap() + 1,
            entries.iter().map(|e| e.v).max().unwrap() + 1,
        )
    });
    let mut by_index: BTreeMap<(usize, usize), &ViewEntry> = BTreeMap::new();
    for e in entries {
        if e.u >= rows || e.v >= cols {
            return Err(Error::UnknownViewIndex {
                u: e.u,
                v: e.v,
                rows,
                cols,
            });
        }
        if by_index.insert((e.u, e.v), e).is_some() {
            return Err(Error::DuplicateView { u: e.u, v: e.v });
        }
    }
    for u in 0..rows {
        for v in 0..cols {
            if !by_index.contains_key(&(u, v)) {
                return Err(Error::MissingView { u, v });
            }
        }
    }

    let mut shape: Option<(usize, usize, usize)> = None;
    let mut samples = Vec::new();
    for (&(u, v), e) in &by_index {
        let path = dir.join(&e.file);
        let bad = |reason: String| Error::BadView {
            u,
            v,
            file: path.clone(),
            reason,
        };
        let img = image::open(&path).map_err(|err| bad(err.to_string()))?;
        let view = decode(img);
        let this = (view.rows, view.cols, view.channels);
        match shape {
            None => {
                shape = Some(this);
                samples.reserve(rows * cols * view.samples.len());
            }
            Some(first) if first != this => {
                return Err(bad(format!(
                    "dimensions {}x{}x{} differ from {}x{}x{}",
                    this.0, this.1, this.2, first.0, first.1, first.2
                )));
            }
            Some(_) => {}
        }
        samples.extend_from_slice(&view.samples);
    }
    let (s, t, c) = shape.unwrap();
    LightField::from_clamped(LfDims::new(rows, cols, s, t, c), samples)
}

/// Reads the manifest at `manifest` and imports views relative to `dir`.
pub fn import_view_grid(dir: &Path, manifest: &Path) -> Result<LightField> {
    import_views(dir, &read_view_manifest(manifest)?, None)
}
