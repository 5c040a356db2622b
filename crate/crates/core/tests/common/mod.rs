//! Scene generators and brute-force oracles shared by the integration tests.
//!
//! Oracles here are written directly from the defining formulas and never call
//! into the implementation paths they check.

#![allow(dead_code)]

use lfref_core::{ImageDims, ImagePlane, LfDims, LightField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth periodic texture: a sum of 20 random sinusoids with at most 8 cycles
/// across each axis, values inside `[0.1, 0.9]`.
pub fn smooth_texture(s: usize, t: usize, c: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(f64, f64, [f64; 3])> = (0..20)
        .map(|_| {
            (
                rng.random_range(-8..=8) as f64,
                rng.random_range(-8..=8) as f64,
                [0; 3].map(|_| rng.random_range(0.0..std::f64::consts::TAU)),
            )
        })
        .collect();
    let mut out = Vec::with_capacity(s * t * c);
    for y in 0..s {
        for x in 0..t {
            for ch in 0..c {
                let acc: f64 = waves
                    .iter()
                    .map(|(fy, fx, ph)| {
                        (std::f64::consts::TAU * (fy * y as f64 / s as f64 + fx * x as f64 / t as f64) + ph[ch]).cos()
                    })
                    .sum();
                out.push(0.5 + 0.4 * acc / 20.0);
            }
        }
    }
    out
}

/// Fronto-parallel plane: a scene point at `p` appears at `p + d (u - uc)` in view `u`
/// (likewise along `v`). `d` must be an integer number of pixels; the texture wraps.
pub fn plane_scene(dims: LfDims, disparity: i64, seed: u64) -> LightField {
    let tex = smooth_texture(dims.s, dims.t, dims.c, seed);
    let uc = (dims.u as i64 - 1) / 2;
    let vc = (dims.v as i64 - 1) / 2;
    LightField::from_fn(dims, |u, v, s, t, c| {
        let ss = (s as i64 - disparity * (u as i64 - uc)).rem_euclid(dims.s as i64) as usize;
        let tt = (t as i64 - disparity * (v as i64 - vc)).rem_euclid(dims.t as i64) as usize;
        tex[(ss * dims.t + tt) * dims.c + c] as f32
    })
    .unwrap()
}

/// Per-pixel average over all views, accumulated in f64 in `(u, v)` order.
pub fn view_mean(lf: &LightField) -> Vec<f32> {
    let d = lf.dims();
    let mut out = Vec::with_capacity(d.s * d.t * d.c);
    for s in 0..d.s {
        for t in 0..d.t {
            for c in 0..d.c {
                let mut acc = 0f64;
                for u in 0..d.u {
                    for v in 0..d.v {
                        acc += lf.get(u, v, s, t, c) as f64;
                    }
                }
                out.push((acc / (d.u * d.v) as f64) as f32);
            }
        }
    }
    out
}

pub fn rms(a: &[f32], b: &[f32]) -> f64 {
    assert_eq!(a.len(), b.len());
    let sum: f64 = a.iter().zip(b).map(|(&x, &y)| (x as f64 - y as f64).powi(2)).sum();
    (sum / a.len() as f64).sqrt()
}

pub fn random_image(dims: ImageDims, seed: u64) -> ImagePlane {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ImagePlane::from_fn(dims, |_, _, _| rng.random::<f32>()).unwrap()
}

/// Direct PSNR with peak 1 and a 100 dB cap.
pub fn psnr_oracle(a: &ImagePlane, b: &ImagePlane) -> f64 {
    let mut sum = 0.0;
    let n = a.samples().len();
    for i in 0..n {
        let d = a.samples()[i] as f64 - b.samples()[i] as f64;
        sum += d * d;
    }
    let mse = sum / n as f64;
    if mse == 0.0 {
        100.0
    } else {
        (10.0 * (1.0 / mse).log10()).min(100.0)
    }
}

pub fn mse_oracle(a: &ImagePlane, b: &ImagePlane) -> f64 {
    let n = a.samples().len() as f64;
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (x as f64 - y as f64).powi(2))
        .sum::<f64>()
        / n
}

pub fn mae_oracle(a: &ImagePlane, b: &ImagePlane) -> f64 {
    let n = a.samples().len() as f64;
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (x as f64 - y as f64).abs())
        .sum::<f64>()
        / n
}

/// Literal sliding-window SSIM: 11x11 Gaussian (sigma 1.5) weights normalized over
/// the 2-D window, two-pass local moments, C1 = 0.01^2, C2 = 0.03^2, mean over
/// fully covered positions, then over channels.
pub fn ssim_oracle(a: &ImagePlane, b: &ImagePlane) -> f64 {
    let d = a.dims();
    let side = 11usize;
    let sigma = 1.5f64;
    let mut w = vec![0f64; side * side];
    for i in 0..side {
        for j in 0..side {
            let (y, x) = (i as f64 - 5.0, j as f64 - 5.0);
            w[i * side + j] = (-(x * x + y * y) / (2.0 * sigma * sigma)).exp();
        }
    }
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut per_channel = 0.0;
    for c in 0..d.c {
        let mut sum = 0.0;
        let mut count = 0usize;
        for s0 in 0..=d.s - side {
            for t0 in 0..=d.t - side {
                let (mut mx, mut my) = (0.0, 0.0);
                for i in 0..side {
                    for j in 0..side {
                        mx += w[i * side + j] * a.get(s0 + i, t0 + j, c) as f64;
                        my += w[i * side + j] * b.get(s0 + i, t0 + j, c) as f64;
                    }
                }
                let (mut vx, mut vy, mut cov) = (0.0, 0.0, 0.0);
                for i in 0..side {
                    for j in 0..side {
                        let dx = a.get(s0 + i, t0 + j, c) as f64 - mx;
                        let dy = b.get(s0 + i, t0 + j, c) as f64 - my;
                        vx += w[i * side + j] * dx * dx;
                        vy += w[i * side + j] * dy * dy;
                        cov += w[i * side + j] * dx * dy;
                    }
                }
                sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
                count += 1;
            }
        }
        per_channel += sum / count as f64;
    }
    per_channel / d.c as f64
}

/// SSIM of two constant images: only the luminance term differs from 1.
pub fn ssim_constant_oracle(m1: f64, m2: f64) -> f64 {
    let c1 = 0.01f64.powi(2);
    (2.0 * m1 * m2 + c1) / (m1 * m1 + m2 * m2 + c1)
}

pub fn loss_oracle(a: &ImagePlane, b: &ImagePlane, beta: f64, gamma: f64) -> f64 {
    let psi1 = beta * (1.0 - ssim_oracle(a, b)) / 2.0 + (1.0 - beta) * mae_oracle(a, b);
    mse_oracle(a, b) + psi1 + gamma / psnr_oracle(a, b)
}
