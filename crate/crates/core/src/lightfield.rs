//! In-memory data model: light fields, image planes, alpha sets and focal stacks.
//!
//! All sample buffers are row-major. A light field is laid out `(u, v, s, t, c)`
//! so that each sub-aperture view `(u, v)` is one contiguous slab of `S * T * C`
//! values.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Shape of a light field: angular rows/cols, spatial rows/cols, channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LfDims {
    pub u: usize,
    pub v: usize,
    pub s: usize,
    pub t: usize,
    pub c: usize,
}

impl LfDims {
    pub const fn new(u: usize, v: usize, s: usize, t: usize, c: usize) -> Self {
        LfDims { u, v, s, t, c }
    }

    /// The shape every dataset field is cropped to before labelling.
    pub const CANONICAL: LfDims = LfDims::new(7, 7, 375, 540, 3);

    pub fn validate(&self) -> Result<()> {
        if self.u == 0 || self.v == 0 || self.s == 0 || self.t == 0 {
            return Err(Error::InvalidDims(format!("{self}: every extent must be >= 1")));
        }
        if self.c != 1 && self.c != 3 {
            return Err(Error::InvalidDims(format!("{self}: channels must be 1 or 3")));
        }
        self.checked_len()
            .map(|_| ())
            .ok_or_else(|| Error::DimensionOverflow(self.as_u64().to_vec()))
    }

    pub fn checked_len(&self) -> Option<usize> {
        self.u
            .checked_mul(self.v)?
            .checked_mul(self.s)?
            .checked_mul(self.t)?
            .checked_mul(self.c)
    }

    /// Total number of samples. Only meaningful on validated dims.
    pub fn len(&self) -> usize {
        self.u * self.v * self.s * self.t * self.c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn views(&self) -> usize {
        self.u * self.v
    }

    /// Samples in one sub-aperture view.
    pub fn view_len(&self) -> usize {
        self.s * self.t * self.c
    }

    pub fn image_dims(&self) -> ImageDims {
        ImageDims::new(self.s, self.t, self.c)
    }

    pub fn as_array(&self) -> [usize; 5] {
        [self.u, self.v, self.s, self.t, self.c]
    }

    fn as_u64(&self) -> [u64; 5] {
        self.as_array().map(|x| x as u64)
    }

    #[inline]
    pub fn index(&self, u: usize, v: usize, s: usize, t: usize, c: usize) -> usize {
        (((u * self.v + v) * self.s + s) * self.t + t) * self.c + c
    }
}

impl fmt::Display for LfDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}x{}x{}x{}", self.u, self.v, self.s, self.t, self.c)
    }
}

/// Shape of a single image: rows, cols, channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ImageDims {
    pub s: usize,
    pub t: usize,
    pub c: usize,
}

impl ImageDims {
    pub const fn new(s: usize, t: usize, c: usize) -> Self {
        ImageDims { s, t, c }
    }

    pub fn len(&self) -> usize {
        self.s * self.t * self.c
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.s, self.t, self.c]
    }

    #[inline]
    pub fn index(&self, s: usize, t: usize, c: usize) -> usize {
        (s * self.t + t) * self.c + c
    }
}

/// A 4-D light field with color, samples in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LightField {
    dims: LfDims,
    samples: Vec<f32>,
}

impl LightField {
    /// Builds a light field, rejecting non-finite or out-of-range samples.
    pub fn new(dims: LfDims, samples: Vec<f32>) -> Result<Self> {
        dims.validate()?;
        check_len(dims.len(), samples.len())?;
        if let Some((index, &value)) = samples
            .iter()
            .enumerate()
            .find(|(_, x)| !(0.0..=1.0).contains(*x))
        {
            return Err(Error::InvalidSample { index, value });
        }
        Ok(LightField { dims, samples })
    }

    /// Builds a light field, clamping finite samples into `[0, 1]`.
    pub fn from_clamped(dims: LfDims, mut samples: Vec<f32>) -> Result<Self> {
        dims.validate()?;
        check_len(dims.len(), samples.len())?;
        for (index, x) in samples.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidSample { index, value: *x });
            }
            *x = x.clamp(0.0, 1.0);
        }
        Ok(LightField { dims, samples })
    }

    pub fn from_fn<F>(dims: LfDims, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize, usize, usize) -> f32,
    {
        dims.validate()?;
        let mut samples = Vec::with_capacity(dims.len());
        for u in 0..dims.u {
            for v in 0..dims.v {
                for s in 0..dims.s {
                    for t in 0..dims.t {
                        for c in 0..dims.c {
                            samples.push(f(u, v, s, t, c));
                        }
                    }
                }
            }
        }
        Self::from_clamped(dims, samples)
    }

    pub fn constant(dims: LfDims, value: f32) -> Result<Self> {
        dims.validate()?;
        Self::new(dims, vec![value; dims.len()])
    }

    /// Uniform random samples in `[0, 1)`, reproducible from `seed`.
    pub fn random(dims: LfDims, seed: u64) -> Result<Self> {
        dims.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..dims.len()).map(|_| rng.random::<f32>()).collect();
        Self::new(dims, samples)
    }

    pub fn dims(&self) -> LfDims {
        self.dims
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f32> {
        self.samples
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize, s: usize, t: usize, c: usize) -> f32 {
        self.samples[self.dims.index(u, v, s, t, c)]
    }

    /// The contiguous `(s, t, c)` slab of sub-aperture view `(u, v)`.
    pub fn view(&self, u: usize, v: usize) -> &[f32] {
        let n = self.dims.view_len();
        let start = (u * self.dims.v + v) * n;
        &self.samples[start..start + n]
    }

    /// Copies out the block starting at `origin` with extent `size`, both `(u, v, s, t)`.
    pub fn sub_block(&self, origin: [usize; 4], size: [usize; 4]) -> Result<LightField> {
        let src = self.dims;
        let src_ext = [src.u, src.v, src.s, src.t];
        for axis in 0..4 {
            if size[axis] == 0 || origin[axis] + size[axis] > src_ext[axis] {
                return Err(Error::CropTooLarge {
                    target: size.to_vec(),
                    source_dims: src_ext.to_vec(),
                });
            }
        }
        let dims = LfDims::new(size[0], size[1], size[2], size[3], src.c);
        let row = size[3] * src.c;
        let mut samples = Vec::with_capacity(dims.len());
        for u in origin[0]..origin[0] + size[0] {
            for v in origin[1]..origin[1] + size[1] {
                for s in origin[2]..origin[2] + size[2] {
                    let start = src.index(u, v, s, origin[3], 0);
                    samples.extend_from_slice(&self.samples[start..start + row]);
                }
            }
        }
        Ok(LightField { dims, samples })
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Truncated { expected, found });
    }
    Ok(())
}

/// A single 2-D image with channels, e.g. one refocused photograph.
#[derive(Clone, Debug, PartialEq)]
pub struct ImagePlane {
    dims: ImageDims,
    samples: Vec<f32>,
}

impl ImagePlane {
    pub fn new(dims: ImageDims, samples: Vec<f32>) -> Result<Self> {
        if dims.s == 0 || dims.t == 0 || dims.c == 0 {
            return Err(Error::InvalidDims(format!("image {:?}", dims.as_array())));
        }
        check_len(dims.len(), samples.len())?;
        if let Some((index, &value)) = samples.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::InvalidSample { index, value });
        }
        Ok(ImagePlane { dims, samples })
    }

    pub fn from_fn<F>(dims: ImageDims, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize, usize) -> f32,
    {
        let mut samples = Vec::with_capacity(dims.len());
        for s in 0..dims.s {
            for t in 0..dims.t {
                for c in 0..dims.c {
                    samples.push(f(s, t, c));
                }
            }
        }
        Self::new(dims, samples)
    }

    pub fn dims(&self) -> ImageDims {
        self.dims
    }

    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize, c: usize) -> f32 {
        self.samples[self.dims.index(s, t, c)]
    }

    pub fn crop(&self, row: usize, col: usize, rows: usize, cols: usize) -> Result<ImagePlane> {
        if rows == 0 || cols == 0 || row + rows > self.dims.s || col + cols > self.dims.t {
            return Err(Error::CropTooLarge {
                target: vec![row + rows, col + cols],
                source_dims: vec![self.dims.s, self.dims.t],
            });
        }
        let c = self.dims.c;
        let mut samples = Vec::with_capacity(rows * cols * c);
        for s in row..row + rows {
            let start = self.dims.index(s, col, 0);
            samples.extend_from_slice(&self.samples[start..start + cols * c]);
        }
        Ok(ImagePlane {
            dims: ImageDims::new(rows, cols, c),
            samples,
        })
    }
}

/// Strictly increasing set of positive refocusing parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaSet(Vec<f64>);

impl AlphaSet {
    pub fn new(alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::InvalidAlphaSet("empty".into()));
        }
        for &a in &alphas {
            if !(a.is_finite() && a > 0.0) {
                return Err(Error::InvalidAlpha(a));
            }
        }
        if alphas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidAlphaSet(format!(
                "values must be strictly increasing: {alphas:?}"
            )));
        }
        Ok(AlphaSet(alphas))
    }

    pub fn single(alpha: f64) -> Result<Self> {
        Self::new(vec![alpha])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}

impl Default for AlphaSet {
    /// `{0.125, 0.250, ..., 2.0}`.
    fn default() -> Self {
        AlphaSet((1..=16).map(|k| 0.125 * k as f64).collect())
    }
}

impl FromStr for AlphaSet {
    type Err = Error;

    /// Parses a comma separated list such as `0.5,1,1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let alphas = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::InvalidAlphaSet(format!("{tok:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphas)
    }
}

/// Refocused images paired index-for-index with their alpha values.
#[derive(Clone, Debug, PartialEq)]
pub struct FocalStack {
    alphas: AlphaSet,
    images: Vec<ImagePlane>,
}

impl FocalStack {
    pub fn new(alphas: AlphaSet, images: Vec<ImagePlane>) -> Result<Self> {
        if alphas.len() != images.len() {
            return Err(Error::Misaligned(format!(
                "{} alphas but {} images",
                alphas.len(),
                images.len()
            )));
        }
        let dims = images[0].dims();
        if let Some(bad) = images.iter().find(|im| im.dims() != dims) {
            return Err(Error::DimMismatch {
                left: dims.as_array().to_vec(),
                right: bad.dims().as_array().to_vec(),
            });
        }
        Ok(FocalStack { alphas, images })
    }

    pub fn alphas(&self) -> &AlphaSet {
        &self.alphas
    }

    pub fn images(&self) -> &[ImagePlane] {
        &self.images
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image_dims(&self) -> ImageDims {
        self.images[0].dims()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &ImagePlane)> {
        self.alphas.iter().zip(self.images.iter())
    }

    /// Crops every image to the same spatial window.
    pub fn crop(&self, row: usize, col: usize, rows: usize, cols: usize) -> Result<FocalStack> {
        let images = self
            .images
            .iter()
            .map(|im| im.crop(row, col, rows, cols))
            .collect::<Result<Vec<_>>>()?;
        FocalStack::new(self.alphas.clone(), images)
    }
}

/// Crops the centered `(u, v, s, t)` block; channels are kept.
///
/// Offsets are `floor((source - target) / 2)` on every axis, so odd surpluses
/// keep the lower-index side.
pub fn center_crop(lf: &LightField, target: [usize; 4]) -> Result<LightField> {
    let d = lf.dims();
    let src = [d.u, d.v, d.s, d.t];
    if target.iter().zip(src.iter()).any(|(&t, &s)| t > s || t == 0) {
        return Err(Error::CropTooLarge {
            target: target.to_vec(),
            source_dims: src.to_vec(),
        });
    }
    let origin = [0, 1, 2, 3].map(|i| (src[i] - target[i]) / 2);
    lf.sub_block(origin, target)
}

/// A spatial crop of a light field, without labels yet.
#[derive(Clone, Debug, PartialEq)]
pub struct Patch {
    pub lf_patch: LightField,
    /// `(row, col)` of the top-left corner in the source field.
    pub origin: (usize, usize),
}

/// A training sample: light field crop and the label stack cropped at the same window.
#[derive(Clone, Debug, PartialEq)]
pub struct PatchRecord {
    pub lf_patch: LightField,
    pub label_stack: FocalStack,
    pub source_id: String,
    pub crop_origin: (usize, usize),
}

impl PatchRecord {
    pub fn new(patch: Patch, labels: &FocalStack, source_id: impl Into<String>) -> Result<Self> {
        let d = patch.lf_patch.dims();
        let (row, col) = patch.origin;
        let label_stack = labels.crop(row, col, d.s, d.t)?;
        Ok(PatchRecord {
            lf_patch: patch.lf_patch,
            label_stack,
            source_id: source_id.into(),
            crop_origin: patch.origin,
        })
    }
}

/// Uniformly random top-left corner for a `size x size` spatial crop.
pub fn patch_origin(dims: LfDims, seed: u64, size: usize) -> Result<(usize, usize)> {
    if size == 0 || size > dims.s || size > dims.t {
        return Err(Error::CropTooLarge {
            target: vec![size, size],
            source_dims: vec![dims.s, dims.t],
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let row = rng.random_range(0..=dims.s - size);
    let col = rng.random_range(0..=dims.t - size);
    Ok((row, col))
}

/// Random `size x size` spatial crop keeping every view.
pub fn random_patch(lf: &LightField, seed: u64, size: usize) -> Result<Patch> {
    let d = lf.dims();
    let (row, col) = patch_origin(d, seed, size)?;
    let lf_patch = lf.sub_block([0, 0, row, col], [d.u, d.v, size, size])?;
    Ok(Patch {
        lf_patch,
        origin: (row, col),
    })
}
