use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the refocusing toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("truncated payload: {expected} values required, {found} present")]
    Truncated { expected: usize, found: usize },

    #[error("trailing bytes after payload: {0} unexpected bytes")]
    TrailingBytes(usize),

    #[error("dimension overflow: {0:?} does not fit in addressable memory")]
    DimensionOverflow(Vec<u64>),

    #[error("invalid dimensions: {0}")]
    InvalidDims(String),

    #[error("invalid sample {value} at flat index {index}")]
    InvalidSample { index: usize, value: f32 },

    #[error("invalid refocusing parameter alpha = {0}")]
    InvalidAlpha(f64),

    #[error("invalid alpha set: {0}")]
    InvalidAlphaSet(String),

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("crop target {target:?} exceeds source {source_dims:?}")]
    CropTooLarge {
        target: Vec<usize>,
        source_dims: Vec<usize>,
    },

    #[error("image {dims:?} is smaller than the {window}x{window} SSIM window")]
    ImageTooSmall { dims: Vec<usize>, window: usize },

    #[error("focal stacks are misaligned: {0}")]
    Misaligned(String),

    #[error("view manifest: {0}")]
    Manifest(String),

    #[error("missing view (u={u}, v={v})")]
    MissingView { u: usize, v: usize },

    #[error("duplicate view (u={u}, v={v})")]
    DuplicateView { u: usize, v: usize },

    #[error("view (u={u}, v={v}) is outside the {rows}x{cols} grid")]
    UnknownViewIndex {
        u: usize,
        v: usize,
        rows: usize,
        cols: usize,
    },

    #[error("view (u={u}, v={v}) in {file}: {reason}")]
    BadView {
        u: usize,
        v: usize,
        file: PathBuf,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
