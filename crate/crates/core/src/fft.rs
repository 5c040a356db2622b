//! Multi-dimensional FFT built from 1-D transforms.
//!
//! Each pass transforms the contiguous last axis and then transposes it to the
//! front. After `rank` passes every axis has been transformed and the buffer is
//! back in its original layout. Both directions are unnormalized.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex32;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f32>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f32>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

/// In-place unnormalized DFT over every axis of a row-major array of `shape`.
pub(crate) fn fft_nd(data: &mut Vec<Complex32>, shape: &[usize], direction: FftDirection) {
    let n: usize = shape.iter().product();
    assert_eq!(data.len(), n, "buffer does not match shape");
    if n == 0 {
        return;
    }
    let mut scratch = vec![Complex32::default(); n];
    // Axis lengths in the order they arrive at the back of the buffer.
    for &len in shape.iter().rev() {
        if len == 1 {
            continue;
        }
        let fft = plan(len, direction);
        let scratch_len = fft.get_inplace_scratch_len();
        data.par_chunks_mut(len).for_each_init(
            || vec![Complex32::default(); scratch_len],
            |buf, row| fft.process_with_scratch(row, buf),
        );
        transpose(data, &mut scratch, n / len, len);
        std::mem::swap(data, &mut scratch);
    }
}

/// `dst[j * rows + i] = src[i * cols + j]`.
fn transpose(src: &[Complex32], dst: &mut [Complex32], rows: usize, cols: usize) {
    const BLOCK: usize = 8;
    dst.par_chunks_mut(rows * BLOCK)
        .enumerate()
        .for_each(|(b, out)| {
            let j0 = b * BLOCK;
            let width = out.len() / rows;
            for i in 0..rows {
                let src_row = &src[i * cols + j0..i * cols + j0 + width];
                for (jj, &z) in src_row.iter().enumerate() {
                    out[jj * rows + i] = z;
                }
            }
        });
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(N^2) DFT over a row-major array of arbitrary rank.
    fn naive_dft(data: &[Complex32], shape: &[usize], sign: f64) -> Vec<Complex32> {
        let n: usize = shape.iter().product();
        let unravel = |mut k: usize| {
            let mut idx = vec![0; shape.len()];
            for axis in (0..shape.len()).rev() {
                idx[axis] = k % shape[axis];
                k /= shape[axis];
            }
            idx
        };
        (0..n)
            .map(|k| {
                let kk = unravel(k);
                let mut acc = num_complex::Complex64::new(0.0, 0.0);
                for (x, &z) in data.iter().enumerate() {
                    let xx = unravel(x);
                    let phase: f64 = kk
                        .iter()
                        .zip(&xx)
                        .zip(shape)
                        .map(|((&a, &b), &len)| (a * b) as f64 / len as f64)
                        .sum();
                    let w = num_complex::Complex64::from_polar(1.0, sign * 2.0 * std::f64::consts::PI * phase);
                    acc += w * num_complex::Complex64::new(z.re as f64, z.im as f64);
                }
                Complex32::new(acc.re as f32, acc.im as f32)
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<Complex32> {
        (0..n)
            .map(|i| Complex32::new(((i * 37 % 11) as f32) / 11.0, ((i * 13 % 7) as f32) / 7.0))
            .collect()
    }

    #[test]
    fn matches_naive_dft_rank4() {
        let shape = [3, 2, 5, 4];
        let input = sample(shape.iter().product());
        let mut fast = input.clone();
        fft_nd(&mut fast, &shape, FftDirection::Forward);
        let slow = naive_dft(&input, &shape, -1.0);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-3, "{a} vs {b}");
        }
    }

    #[test]
    fn inverse_round_trip_with_unit_axes() {
        let shape = [1, 3, 1, 6];
        let input = sample(18);
        let mut buf = input.clone();
        fft_nd(&mut buf, &shape, FftDirection::Forward);
        fft_nd(&mut buf, &shape, FftDirection::Inverse);
        for (a, b) in buf.iter().zip(&input) {
            assert!((a / 18.0 - b).norm() < 1e-5);
        }
    }

    #[test]
    fn transpose_rectangular() {
        let src = sample(3 * 10);
        let mut dst = vec![Complex32::default(); 30];
        transpose(&src, &mut dst, 3, 10);
        for i in 0..3 {
            for j in 0..10 {
                assert_eq!(dst[j * 3 + i], src[i * 10 + j]);
            }
        }
    }
}
