//! Image quality metrics and the composite training loss.
//!
//! All arithmetic is carried out in f64. Images are compared over every pixel
//! and channel; SSIM is computed per channel over the positions where the whole
//! Gaussian window fits, then averaged over channels.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lightfield::{FocalStack, ImagePlane};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SsimParams {
    /// Side of the square Gaussian window, odd.
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub peak: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        SsimParams {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            peak: 1.0,
        }
    }
}

impl SsimParams {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.peak).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.peak).powi(2)
    }

    fn validate(&self) -> Result<()> {
        if self.window == 0 || self.window.is_multiple_of(2) {
            return Err(Error::InvalidParam(format!(
                "SSIM window side must be odd, got {}",
                self.window
            )));
        }
        if !(self.sigma > 0.0 && self.peak > 0.0) {
            return Err(Error::InvalidParam("SSIM sigma and peak must be positive".into()));
        }
        Ok(())
    }

    /// Normalized 1-D Gaussian taps; the 2-D window is their outer product and sums to 1.
    pub fn gaussian_taps(&self) -> Vec<f64> {
        let r = (self.window / 2) as f64;
        let raw: Vec<f64> = (0..self.window)
            .map(|i| {
                let x = i as f64 - r;
                (-x * x / (2.0 * self.sigma * self.sigma)).exp()
            })
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / sum).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsnrParams {
    pub peak: f64,
    /// Ceiling in dB, also returned for identical images.
    pub cap_db: f64,
}

impl Default for PsnrParams {
    fn default() -> Self {
        PsnrParams {
            peak: 1.0,
            cap_db: 100.0,
        }
    }
}

/// Weights of the composite loss `MSE + psi1 + gamma * psi2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossParams {
    /// Balance between the SSIM and L1 terms of psi1.
    pub beta: f64,
    /// Weight of the inverse-PSNR term.
    pub gamma: f64,
    pub psnr_cap: f64,
    pub ssim: SsimParams,
}

impl Default for LossParams {
    fn default() -> Self {
        LossParams {
            beta: 0.65,
            gamma: 500.0,
            psnr_cap: 100.0,
            ssim: SsimParams::default(),
        }
    }
}

impl LossParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::InvalidParam(format!("beta must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParam(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.psnr_cap > 0.0 && self.psnr_cap.is_finite()) {
            return Err(Error::InvalidParam(format!(
                "psnr_cap must be positive, got {}",
                self.psnr_cap
            )));
        }
        self.ssim.validate()
    }

    pub fn psnr_params(&self) -> PsnrParams {
        PsnrParams {
            peak: self.ssim.peak,
            cap_db: self.psnr_cap,
        }
    }
}

fn check_dims(a: &ImagePlane, b: &ImagePlane) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimMismatch {
            left: a.dims().as_array().to_vec(),
            right: b.dims().as_array().to_vec(),
        });
    }
    Ok(())
}

/// Mean squared error over all pixels and channels.
pub fn mse(a: &ImagePlane, b: &ImagePlane) -> Result<f64> {
    check_dims(a, b)?;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| {
            let d = x as f64 - y as f64;
            d * d
        })
        .sum();
    Ok(sum / a.samples().len() as f64)
}

/// Mean absolute error over all pixels and channels.
pub fn mae(a: &ImagePlane, b: &ImagePlane) -> Result<f64> {
    check_dims(a, b)?;
    let sum: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (x as f64 - y as f64).abs())
        .sum();
    Ok(sum / a.samples().len() as f64)
}

/// `10 log10(peak^2 / MSE)`, never above `params.cap_db`.
pub fn psnr(a: &ImagePlane, b: &ImagePlane, params: &PsnrParams) -> Result<f64> {
    let err = mse(a, b)?;
    Ok(psnr_from_mse(err, params))
}

fn psnr_from_mse(err: f64, params: &PsnrParams) -> f64 {
    if err <= 0.0 {
        return params.cap_db;
    }
    let db = 10.0 * (params.peak * params.peak / err).log10();
    db.min(params.cap_db)
}

/// Correlates each row with `taps`, keeping only fully covered positions.
fn filter_rows_valid(src: &[f64], rows: usize, cols: usize, taps: &[f64]) -> Vec<f64> {
    let out_cols = cols + 1 - taps.len();
    let mut out = vec![0f64; rows * out_cols];
    for r in 0..rows {
        let row = &src[r * cols..(r + 1) * cols];
        for (j, o) in out[r * out_cols..(r + 1) * out_cols].iter_mut().enumerate() {
            *o = taps.iter().zip(&row[j..]).map(|(w, x)| w * x).sum();
        }
    }
    out
}

fn filter_cols_valid(src: &[f64], rows: usize, cols: usize, taps: &[f64]) -> Vec<f64> {
    let out_rows = rows + 1 - taps.len();
    let mut out = vec![0f64; out_rows * cols];
    for i in 0..out_rows {
        let dst = &mut out[i * cols..(i + 1) * cols];
        for (k, &w) in taps.iter().enumerate() {
            let row = &src[(i + k) * cols..(i + k + 1) * cols];
            for (o, &x) in dst.iter_mut().zip(row) {
                *o += w * x;
            }
        }
    }
    out
}

fn gaussian_valid(src: &[f64], rows: usize, cols: usize, taps: &[f64]) -> Vec<f64> {
    let h = filter_rows_valid(src, rows, cols, taps);
    filter_cols_valid(&h, rows, cols + 1 - taps.len(), taps)
}

fn channel(img: &ImagePlane, c: usize) -> Vec<f64> {
    let ch = img.dims().c;
    img.samples()
        .iter()
        .skip(c)
        .step_by(ch)
        .map(|&x| x as f64)
        .collect()
}

/// Mean SSIM over valid window positions, averaged over channels.
pub fn ssim(a: &ImagePlane, b: &ImagePlane, params: &SsimParams) -> Result<f64> {
    check_dims(a, b)?;
    params.validate()?;
    let d = a.dims();
    if d.s < params.window || d.t < params.window {
        return Err(Error::ImageTooSmall {
            dims: d.as_array().to_vec(),
            window: params.window,
        });
    }
    let taps = params.gaussian_taps();
    let (c1, c2) = (params.c1(), params.c2());
    let mut total = 0.0;
    for c in 0..d.c {
        let x = channel(a, c);
        let y = channel(b, c);
        let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
        let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
        let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();
        let [mx, my, exx, eyy, exy] =
            [&x, &y, &xx, &yy, &xy].map(|m| gaussian_valid(m, d.s, d.t, &taps));
        let mut sum = 0.0;
        for i in 0..mx.len() {
            let (ux, uy) = (mx[i], my[i]);
            let vx = exx[i] - ux * ux;
            let vy = eyy[i] - uy * uy;
            let cov = exy[i] - ux * uy;
            sum += ((2.0 * ux * uy + c1) * (2.0 * cov + c2))
                / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
        }
        total += sum / mx.len() as f64;
    }
    Ok(total / d.c as f64)
}

/// Appearance-matching term: `beta (1 - SSIM) / 2 + (1 - beta) * mean|a - b|`.
pub fn psi1(a: &ImagePlane, b: &ImagePlane, params: &LossParams) -> Result<f64> {
    params.validate()?;
    let s = ssim(a, b, &params.ssim)?;
    let l1 = mae(a, b)?;
    Ok(params.beta * (1.0 - s) / 2.0 + (1.0 - params.beta) * l1)
}

/// Inverse of the capped PSNR.
pub fn psi2(a: &ImagePlane, b: &ImagePlane, params: &LossParams) -> Result<f64> {
    params.validate()?;
    Ok(1.0 / psnr(a, b, &params.psnr_params())?)
}

/// The three additive terms of the composite loss.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossComponents {
    pub mse: f64,
    pub psi1: f64,
    /// `gamma * psi2`.
    pub gamma_psi2: f64,
}

impl LossComponents {
    pub fn total(&self) -> f64 {
        self.mse + self.psi1 + self.gamma_psi2
    }
}

pub fn loss_components(a: &ImagePlane, b: &ImagePlane, params: &LossParams) -> Result<LossComponents> {
    Ok(LossComponents {
        mse: mse(a, b)?,
        psi1: psi1(a, b, params)?,
        gamma_psi2: params.gamma * psi2(a, b, params)?,
    })
}

/// `MSE + psi1 + gamma * psi2`. Bounded below by `gamma / psnr_cap`.
pub fn total_loss(a: &ImagePlane, b: &ImagePlane, params: &LossParams) -> Result<f64> {
    Ok(loss_components(a, b, params)?.total())
}

fn check_stacks(pred: &FocalStack, truth: &FocalStack) -> Result<()> {
    if pred.alphas() != truth.alphas() {
        return Err(Error::Misaligned(format!(
            "alpha sets differ: {:?} vs {:?}",
            pred.alphas().as_slice(),
            truth.alphas().as_slice()
        )));
    }
    if pred.image_dims() != truth.image_dims() {
        return Err(Error::Misaligned(format!(
            "image dims differ: {:?} vs {:?}",
            pred.image_dims().as_array(),
            truth.image_dims().as_array()
        )));
    }
    Ok(())
}

/// Loss terms averaged over every image pair of two aligned stacks.
pub fn stack_loss(pred: &FocalStack, truth: &FocalStack, params: &LossParams) -> Result<Vec<LossComponents>> {
    check_stacks(pred, truth)?;
    pred.images()
        .iter()
        .zip(truth.images())
        .map(|(p, t)| loss_components(p, t, params))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaQuality {
    pub alpha: f64,
    pub psnr_db: f64,
    pub ssim: f64,
}

/// Per-alpha PSNR/SSIM of a predicted stack against a reference, with their means.
#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport {
    pub per_alpha: Vec<AlphaQuality>,
    pub mssim: f64,
    pub mpsnr: f64,
}

pub const QUALITY_CSV_SCHEMA: &str = "# lfref quality-report v1";

impl QualityReport {
    pub fn from_rows(per_alpha: Vec<AlphaQuality>) -> Self {
        let m = per_alpha.len() as f64;
        let mssim = per_alpha.iter().map(|r| r.ssim).sum::<f64>() / m;
        let mpsnr = per_alpha.iter().map(|r| r.psnr_db).sum::<f64>() / m;
        QualityReport {
            per_alpha,
            mssim,
            mpsnr,
        }
    }

    /// `alpha,psnr_db,ssim` rows followed by a `mean` row holding MPSNR and MSSIM.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{QUALITY_CSV_SCHEMA}").unwrap();
        writeln!(out, "alpha,psnr_db,ssim").unwrap();
        for r in &self.per_alpha {
            writeln!(out, "{},{},{}", fmt_sig9(r.alpha), fmt_sig9(r.psnr_db), fmt_sig9(r.ssim)).unwrap();
        }
        writeln!(out, "mean,{},{}", fmt_sig9(self.mpsnr), fmt_sig9(self.mssim)).unwrap();
        out
    }
}

pub fn stack_report(
    pred: &FocalStack,
    truth: &FocalStack,
    ssim_params: &SsimParams,
    psnr_params: &PsnrParams,
) -> Result<QualityReport> {
    check_stacks(pred, truth)?;
    let rows = pred
        .iter()
        .zip(truth.images())
        .map(|((alpha, p), t)| {
            Ok(AlphaQuality {
                alpha,
                psnr_db: psnr(p, t, psnr_params)?,
                ssim: ssim(p, t, ssim_params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QualityReport::from_rows(rows))
}

/// Formats with 9 significant digits, `%g` style.
pub fn fmt_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Variance of the 3x3 Laplacian response over interior pixels, averaged over channels.
pub fn laplacian_variance(img: &ImagePlane) -> f64 {
    let d = img.dims();
    if d.s < 3 || d.t < 3 {
        return 0.0;
    }
    let mut total = 0.0;
    for c in 0..d.c {
        let x = channel(img, c);
        let at = |s: usize, t: usize| x[s * d.t + t];
        let mut vals = Vec::with_capacity((d.s - 2) * (d.t - 2));
        for s in 1..d.s - 1 {
            for t in 1..d.t - 1 {
                vals.push(at(s - 1, t) + at(s + 1, t) + at(s, t - 1) + at(s, t + 1) - 4.0 * at(s, t));
            }
        }
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        total += vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    }
    total / d.c as f64
}
