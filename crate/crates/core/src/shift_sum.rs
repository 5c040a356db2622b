//! Shift-and-sum synthetic aperture refocusing.
//!
//! Every sub-aperture view `(u, v)` is translated by `k * (u - uc, v - vc)` pixels,
//! with `k = kappa * (1 - 1/alpha)` and `(uc, vc)` the geometric center of the
//! angular grid, and the translated views are averaged:
//!
//! ```text
//! E(s, t, c) = 1/(U V) * sum_{u,v} L(u, v, s - k (u - uc), t - k (v - vc), c)
//! ```
//!
//! A scene point whose image moves by `d` pixels per view step is brought into
//! register when `k = -d`, i.e. at `alpha = 1 / (1 + d / kappa)`. `alpha = 1` is
//! the zero-shift plane.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lightfield::{AlphaSet, FocalStack, ImagePlane, LightField};

/// How samples outside a view are treated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Boundary {
    /// Replicate the nearest edge pixel.
    #[default]
    ClampEdge,
    /// Outside taps contribute nothing; each pixel is divided by the weight that landed.
    ZeroRenorm,
}

/// Resampling kernel used for fractional shifts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Kernel {
    #[default]
    Bilinear,
    Nearest,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftSumParams {
    pub alpha: f64,
    /// Pixels of shift per angular index step at `1 - 1/alpha = 1`.
    pub pixels_per_view: f64,
    pub boundary: Boundary,
    pub kernel: Kernel,
}

impl Default for ShiftSumParams {
    fn default() -> Self {
        ShiftSumParams {
            alpha: 1.0,
            pixels_per_view: 1.0,
            boundary: Boundary::default(),
            kernel: Kernel::default(),
        }
    }
}

impl ShiftSumParams {
    pub fn new(alpha: f64) -> Self {
        ShiftSumParams {
            alpha,
            ..Default::default()
        }
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        ShiftSumParams { alpha, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::InvalidAlpha(self.alpha));
        }
        if !self.pixels_per_view.is_finite() {
            return Err(Error::InvalidParam(format!(
                "pixels_per_view must be finite, got {}",
                self.pixels_per_view
            )));
        }
        Ok(())
    }

    /// Spatial shift applied per angular index step, `kappa * (1 - 1/alpha)`.
    pub fn shift_per_view(&self) -> f64 {
        self.pixels_per_view * (1.0 - 1.0 / self.alpha)
    }
}

/// Per-view resampling taps. Each output pixel reads rows `row0 + s`, `row0 + s + 1`
/// and columns `col0[t]`, `col1[t]`.
struct ViewTaps {
    row_shift: isize,
    row_frac: f64,
    col0: Vec<isize>,
    col1: Vec<isize>,
    col_frac: f64,
}

impl ViewTaps {
    fn new(offset_rows: f64, offset_cols: f64, cols: usize, kernel: Kernel) -> Self {
        let split = |x: f64| match kernel {
            Kernel::Bilinear => {
                let f = x.floor();
                (f as isize, x - f)
            }
            Kernel::Nearest => (x.round() as isize, 0.0),
        };
        let (row_shift, row_frac) = split(offset_rows);
        let (col_shift, col_frac) = split(offset_cols);
        let col0 = (0..cols as isize).map(|t| t + col_shift).collect();
        let col1 = (0..cols as isize).map(|t| t + col_shift + 1).collect();
        ViewTaps {
            row_shift,
            row_frac,
            col0,
            col1,
            col_frac,
        }
    }
}

/// Refocuses `lf` at `params.alpha`. Output has the spatial dims and channels of `lf`.
pub fn shift_and_sum(lf: &LightField, params: &ShiftSumParams) -> Result<ImagePlane> {
    params.validate()?;
    let d = lf.dims();
    let k = params.shift_per_view();
    let uc = (d.u as f64 - 1.0) / 2.0;
    let vc = (d.v as f64 - 1.0) / 2.0;

    let mut taps = Vec::with_capacity(d.views());
    for u in 0..d.u {
        for v in 0..d.v {
            // Output (s, t) samples the view at (s - k (u - uc), t - k (v - vc)).
            let oy = -k * (u as f64 - uc);
            let ox = -k * (v as f64 - vc);
            taps.push(((u, v), ViewTaps::new(oy, ox, d.t, params.kernel)));
        }
    }

    let row_len = d.t * d.c;
    let norm = d.views() as f64;
    let mut out = vec![0f32; d.s * row_len];
    out.par_chunks_mut(row_len).enumerate().for_each_init(
        || (vec![0f64; row_len], vec![0f64; d.t]),
        |(acc, weight), (s, out_row)| {
            acc.fill(0.0);
            weight.fill(0.0);
            for ((u, v), tap) in &taps {
                accumulate_view(lf.view(*u, *v), d.s, d.t, d.c, s, tap, params.boundary, acc, weight);
            }
            match params.boundary {
                Boundary::ClampEdge => {
                    for (o, a) in out_row.iter_mut().zip(acc.iter()) {
                        *o = (*a / norm) as f32;
                    }
                }
                Boundary::ZeroRenorm => {
                    let pixels = out_row.chunks_mut(d.c).zip(acc.chunks(d.c));
                    for ((o, a), &w) in pixels.zip(weight.iter()) {
                        for (o, a) in o.iter_mut().zip(a) {
                            *o = if w > 0.0 { (a / w) as f32 } else { 0.0 };
                        }
                    }
                }
            }
        },
    );
    ImagePlane::new(d.image_dims(), out)
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn accumulate_view(
    view: &[f32],
    rows: usize,
    cols: usize,
    channels: usize,
    s: usize,
    tap: &ViewTaps,
    boundary: Boundary,
    acc: &mut [f64],
    weight: &mut [f64],
) {
    let y0 = s as isize + tap.row_shift;
    let row_taps = [(y0, 1.0 - tap.row_frac), (y0 + 1, tap.row_frac)];
    let col_w = [1.0 - tap.col_frac, tap.col_frac];
    for (y, wy) in row_taps {
        if wy == 0.0 {
            continue;
        }
        let y = match boundary {
            Boundary::ClampEdge => y.clamp(0, rows as isize - 1),
            Boundary::ZeroRenorm if y < 0 || y >= rows as isize => continue,
            Boundary::ZeroRenorm => y,
        } as usize;
        let src_row = &view[y * cols * channels..(y + 1) * cols * channels];
        for (ci, cols_idx) in [&tap.col0, &tap.col1].into_iter().enumerate() {
            let wx = col_w[ci];
            if wx == 0.0 {
                continue;
            }
            let w = wy * wx;
            for t in 0..cols {
                let x = cols_idx[t];
                let x = match boundary {
                    Boundary::ClampEdge => x.clamp(0, cols as isize - 1),
                    Boundary::ZeroRenorm if x < 0 || x >= cols as isize => continue,
                    Boundary::ZeroRenorm => x,
                } as usize;
                let src = &src_row[x * channels..(x + 1) * channels];
                let dst = &mut acc[t * channels..(t + 1) * channels];
                for (a, &v) in dst.iter_mut().zip(src) {
                    *a += w * v as f64;
                }
                weight[t] += w;
            }
        }
    }
}

/// One shift-and-sum image per alpha, index-aligned with `alphas`.
///
/// `params.alpha` is ignored; the other fields apply to every image.
pub fn focal_stack_shift_sum(
    lf: &LightField,
    alphas: &AlphaSet,
    params: &ShiftSumParams,
) -> Result<FocalStack> {
    let images = alphas
        .as_slice()
        .par_iter()
        .map(|&a| shift_and_sum(lf, &params.with_alpha(a)))
        .collect::<Result<Vec<_>>>()?;
    FocalStack::new(alphas.clone(), images)
}
