//! Fourier slice refocusing.
//!
//! One unnormalized 4-D DFT per color channel is computed up front. A refocused
//! image is then a 2-D slice through that spectrum followed by an inverse 2-D
//! DFT. For output frequency `(fs, ft)` (signed, in DFT bins) the slice reads
//! angular frequency
//!
//! ```text
//! fu = (1 - 1/alpha) * rho_u * fs,   rho_u = U * kappa / S
//! fv = (1 - 1/alpha) * rho_v * ft,   rho_v = V * kappa / T
//! ```
//!
//! which is exactly the frequency-domain image of the shift-and-sum operator in
//! [`crate::shift_sum`] for the same `kappa`, so both methods focus on the same
//! plane for a given alpha. Spatial coordinates stay on the DFT grid; the
//! angular coordinates are bilinearly interpolated between bins, using
//! coefficients re-phased to the angular grid center. Bins outside the sampled
//! angular band contribute zero.

use num_complex::Complex32;
use rayon::prelude::*;
use rustfft::FftDirection;

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::lightfield::{AlphaSet, FocalStack, ImagePlane, LfDims, LightField};

/// Per-channel 4-D spectrum of a light field.
///
/// Each channel is a `(u, v, s, t)` row-major array of DFT coefficients with the
/// zero frequency at index `(0, 0, 0, 0)`; bin `k` holds frequency `k` for
/// `k <= n/2` and `k - n` above.
#[derive(Clone, Debug, PartialEq)]
pub struct LfSpectrum {
    dims: LfDims,
    channels: Vec<Vec<Complex32>>,
}

impl LfSpectrum {
    pub fn from_parts(dims: LfDims, channels: Vec<Vec<Complex32>>) -> Result<Self> {
        dims.validate()?;
        let per_channel = dims.u * dims.v * dims.s * dims.t;
        if channels.len() != dims.c || channels.iter().any(|ch| ch.len() != per_channel) {
            return Err(Error::InvalidDims(format!(
                "spectrum data does not match {dims}"
            )));
        }
        Ok(LfSpectrum { dims, channels })
    }

    /// Dims of the light field this spectrum was computed from.
    pub fn dims(&self) -> LfDims {
        self.dims
    }

    pub fn channel(&self, c: usize) -> &[Complex32] {
        &self.channels[c]
    }

    #[inline]
    pub fn coefficient(&self, c: usize, ku: usize, kv: usize, ks: usize, kt: usize) -> Complex32 {
        let d = self.dims;
        self.channels[c][((ku * d.v + kv) * d.s + ks) * d.t + kt]
    }
}

/// Calibration shared with shift-and-sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourierParams {
    /// Pixels of shift per angular index step at `1 - 1/alpha = 1`.
    pub pixels_per_view: f64,
}

impl Default for FourierParams {
    fn default() -> Self {
        FourierParams {
            pixels_per_view: 1.0,
        }
    }
}

/// Unnormalized forward 4-D DFT of every channel.
pub fn fft4(lf: &LightField) -> LfSpectrum {
    let d = lf.dims();
    let shape = [d.u, d.v, d.s, d.t];
    let channels = (0..d.c)
        .map(|c| {
            let mut buf: Vec<Complex32> = lf
                .samples()
                .iter()
                .skip(c)
                .step_by(d.c)
                .map(|&x| Complex32::new(x, 0.0))
                .collect();
            fft_nd(&mut buf, &shape, FftDirection::Forward);
            buf
        })
        .collect();
    LfSpectrum { dims: d, channels }
}

#[inline]
fn signed_freq(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Angular bins of one axis: half-width of the usable band and the
/// re-centering phase `exp(2 pi i f c / n)` for each in-band frequency `f`.
struct AngularAxis {
    n: usize,
    half_band: i64,
    phase: Vec<Complex32>,
}

impl AngularAxis {
    fn new(n: usize) -> Self {
        // Odd n keeps every bin; even n drops the unpaired Nyquist bin.
        let half_band = (n as i64 - 1) / 2;
        let center = (n as f64 - 1.0) / 2.0;
        let phase = (-half_band..=half_band)
            .map(|f| {
                let theta = 2.0 * std::f64::consts::PI * f as f64 * center / n as f64;
                Complex32::new(theta.cos() as f32, theta.sin() as f32)
            })
            .collect();
        AngularAxis { n, half_band, phase }
    }

    /// Up to two `(bin index, weight * phase)` taps for fractional frequency `f`.
    #[inline]
    fn taps(&self, f: f64) -> [(usize, Complex32); 2] {
        let f0 = f.floor();
        let frac = (f - f0) as f32;
        let f0 = f0 as i64;
        let mut out = [(0usize, Complex32::new(0.0, 0.0)); 2];
        for (slot, (g, w)) in out.iter_mut().zip([(f0, 1.0 - frac), (f0 + 1, frac)]) {
            if w != 0.0 && g.abs() <= self.half_band {
                let bin = g.rem_euclid(self.n as i64) as usize;
                *slot = (bin, self.phase[(g + self.half_band) as usize] * w);
            }
        }
        out
    }
}

/// Refocused image at `alpha`: real part of the inverse slice transform, clamped to `[0, 1]`.
pub fn fourier_slice(spec: &LfSpectrum, alpha: f64, params: &FourierParams) -> Result<ImagePlane> {
    let mut samples = slice_unclamped(spec, alpha, params)?;
    for x in &mut samples {
        *x = x.clamp(0.0, 1.0);
    }
    ImagePlane::new(spec.dims.image_dims(), samples)
}

/// Interleaved `(s, t, c)` real output before clamping.
pub(crate) fn slice_unclamped(spec: &LfSpectrum, alpha: f64, params: &FourierParams) -> Result<Vec<f32>> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidAlpha(alpha));
    }
    if !params.pixels_per_view.is_finite() {
        return Err(Error::InvalidParam(format!(
            "pixels_per_view must be finite, got {}",
            params.pixels_per_view
        )));
    }
    let d = spec.dims;
    let k = params.pixels_per_view * (1.0 - 1.0 / alpha);
    let rate_u = k * d.u as f64 / d.s as f64;
    let rate_v = k * d.v as f64 / d.t as f64;
    let axis_u = AngularAxis::new(d.u);
    let axis_v = AngularAxis::new(d.v);
    let taps_v: Vec<_> = (0..d.t)
        .map(|kt| axis_v.taps(rate_v * signed_freq(kt, d.t) as f64))
        .collect();
    let plane = d.s * d.t;
    let norm = 1.0 / (d.u * d.v) as f32;
    let inv_plane = 1.0 / plane as f32;

    let mut out = vec![0f32; plane * d.c];
    for c in 0..d.c {
        let coeffs = spec.channel(c);
        let mut slice = vec![Complex32::new(0.0, 0.0); plane];
        slice
            .par_chunks_mut(d.t)
            .enumerate()
            .for_each(|(ks, row)| {
                let tu = axis_u.taps(rate_u * signed_freq(ks, d.s) as f64);
                for (kt, z) in row.iter_mut().enumerate() {
                    let mut acc = Complex32::new(0.0, 0.0);
                    // Out-of-band taps carry zero weight; evaluating all four keeps the cost independent of U and V.
                    for &(bu, wu) in &tu {
                        for &(bv, wv) in &taps_v[kt] {
                            let idx = ((bu * d.v + bv) * d.s + ks) * d.t + kt;
                            acc += coeffs[idx] * wu * wv;
                        }
                    }
                    *z = acc * norm;
                }
            });
        fft_nd(&mut slice, &[d.s, d.t], FftDirection::Inverse);
        for (i, z) in slice.iter().enumerate() {
            out[i * d.c + c] = z.re * inv_plane;
        }
    }
    Ok(out)
}

/// Computes the spectrum once and slices it at every alpha.
pub fn refocus_fourier(lf: &LightField, alphas: &AlphaSet, params: &FourierParams) -> Result<FocalStack> {
    let spec = fft4(lf);
    refocus_spectrum(&spec, alphas, params)
}

/// Focal stack from an existing spectrum.
pub fn refocus_spectrum(spec: &LfSpectrum, alphas: &AlphaSet, params: &FourierParams) -> Result<FocalStack> {
    let images = alphas
        .as_slice()
        .par_iter()
        .map(|&a| fourier_slice(spec, a, params))
        .collect::<Result<Vec<_>>>()?;
    FocalStack::new(alphas.clone(), images)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view_mean(lf: &LightField) -> Vec<f64> {
        let d = lf.dims();
        let mut acc = vec![0f64; d.view_len()];
        for u in 0..d.u {
            for v in 0..d.v {
                for (a, &x) in acc.iter_mut().zip(lf.view(u, v)) {
                    *a += x as f64;
                }
            }
        }
        acc.iter().map(|a| a / d.views() as f64).collect()
    }

    #[test]
    fn constant_field_has_only_dc() {
        let dims = LfDims::new(3, 4, 6, 5, 1);
        let spec = fft4(&LightField::constant(dims, 0.5).unwrap());
        let dc = spec.coefficient(0, 0, 0, 0, 0);
        assert!((dc.re - 0.5 * 360.0).abs() < 1e-3 && dc.im.abs() < 1e-3);
        let others = spec.channel(0)[1..].iter().map(|z| z.norm()).fold(0f32, f32::max);
        assert!(others < 1e-6 * dc.norm());
    }

    #[test]
    fn alpha_one_is_view_mean() {
        let lf = LightField::random(LfDims::new(4, 3, 8, 10, 3), 2).unwrap();
        let spec = fft4(&lf);
        let out = slice_unclamped(&spec, 1.0, &FourierParams::default()).unwrap();
        for (a, b) in out.iter().zip(view_mean(&lf)) {
            assert!((*a as f64 - b).abs() < 1e-5);
        }
    }

    #[test]
    fn invalid_alpha() {
        let spec = fft4(&LightField::constant(LfDims::new(1, 1, 2, 2, 1), 0.1).unwrap());
        for a in [0.0, -2.0, f64::NAN] {
            assert!(fourier_slice(&spec, a, &FourierParams::default()).is_err());
        }
    }

    #[test]
    fn every_slice_keeps_the_mean() {
        let dims = LfDims::new(5, 5, 12, 9, 1);
        let lf = LightField::from_fn(dims, |u, v, s, t, _| {
            0.5 + 0.2 * ((u * 3 + v + s * 2 + t) as f32 * 0.7).sin()
        })
        .unwrap();
        let spec = fft4(&lf);
        let mean = |x: &[f32]| x.iter().map(|&v| v as f64).sum::<f64>() / x.len() as f64;
        let base = mean(&slice_unclamped(&spec, 1.0, &FourierParams::default()).unwrap());
        for a in [0.125, 0.5, 1.5, 2.0] {
            let m = mean(&slice_unclamped(&spec, a, &FourierParams::default()).unwrap());
            assert!((m - base).abs() < 1e-5, "alpha {a}: {m} vs {base}");
        }
    }
}
