//! Light field refocusing toolkit.
//!
//! Two classical refocusing methods over a shared data model:
//!
//! * [`shift_sum`]: translate each sub-aperture view in proportion to its
//!   angular offset and average, `Θ(U·V·S·T)` per image;
//! * [`fourier`]: one 4-D FFT per channel, then a 2-D slice and inverse 2-D FFT
//!   per image, `Θ(S·T log(S·T))` per image.
//!
//! Both share the convention that a view is shifted by
//! `kappa * (1 - 1/alpha)` pixels per angular step, so `alpha = 1` is the
//! unshifted plane and both produce the plain view average there.
//!
//! [`metrics`] provides PSNR, SSIM, their stack means, and the composite
//! training loss. [`io`] holds the `LFR1`/`LFS1` binary containers.

pub mod bench;
pub mod error;
mod fft;
pub mod fourier;
pub mod import;
pub mod io;
pub mod lightfield;
pub mod metrics;
pub mod shift_sum;

pub use error::{Error, Result};
pub use fourier::{fft4, fourier_slice, refocus_fourier, refocus_spectrum, FourierParams, LfSpectrum};
pub use lightfield::{
    center_crop, patch_origin, random_patch, AlphaSet, FocalStack, ImageDims, ImagePlane, LfDims,
    LightField, Patch, PatchRecord,
};
pub use shift_sum::{focal_stack_shift_sum, shift_and_sum, Boundary, Kernel, ShiftSumParams};
