use std::collections::HashSet;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{DynamicImage, GrayImage, ImageFormat, RgbImage};
use lfref_core::io::{load_lf, save_stack, write_atomic};
use lfref_core::{FocalStack, ImagePlane};

use super::{create_dir, refocus_stack};
use crate::args::RefocusArgs;
use crate::error::{Classify, CliError, CliResult};

pub fn run(args: &RefocusArgs) -> CliResult<()> {
    let lf = load_lf(&args.input).input()?;
    let stack = refocus_stack(&lf, &args.opts).processing()?;
    save_stack(&stack, &args.out).processing()?;
    log::info!(
        "{} images ({}) -> {}",
        stack.len(),
        args.opts.method.as_str(),
        args.out.display()
    );
    if let Some(dir) = &args.png_dir {
        export_pngs(&stack, dir)?;
    }
    Ok(())
}

/// File name for the image at `alpha`, three decimals.
pub fn png_name(alpha: f64) -> String {
    format!("refocus_a{alpha:.3}.png")
}

/// Round-half-to-even quantization of a `[0, 1]` sample.
pub fn quantize(x: f32) -> u8 {
    (x.clamp(0.0, 1.0) * 255.0).round_ties_even() as u8
}

pub fn encode_png(img: &ImagePlane) -> CliResult<Vec<u8>> {
    let d = img.dims();
    let raw: Vec<u8> = img.samples().iter().map(|&x| quantize(x)).collect();
    let (w, h) = (d.t as u32, d.s as u32);
    let dynamic = match d.c {
        1 => DynamicImage::ImageLuma8(GrayImage::from_raw(w, h, raw).unwrap()),
        _ => DynamicImage::ImageRgb8(RgbImage::from_raw(w, h, raw).unwrap()),
    };
    let mut out = Cursor::new(Vec::new());
    dynamic.write_to(&mut out, ImageFormat::Png).processing()?;
    Ok(out.into_inner())
}

pub fn export_pngs(stack: &FocalStack, dir: &Path) -> CliResult<Vec<PathBuf>> {
    let mut names = HashSet::new();
    for a in stack.alphas().iter() {
        if !names.insert(png_name(a)) {
            return Err(CliError::usage(format!(
                "alpha values collide at three decimals ({}); PNG names would clash",
                png_name(a)
            )));
        }
    }
    create_dir(dir)?;
    let mut written = Vec::new();
    for (a, img) in stack.iter() {
        let path = dir.join(png_name(a));
        write_atomic(&path, &encode_png(img)?).processing()?;
        written.push(path);
    }
    Ok(written)
}
