//! Acceptance suite. Runs every criterion in sequence (timing criteria must not
//! share the machine with other tests), prints one PASS/FAIL line each, and
//! exits nonzero if any criterion fails. Built without the libtest harness so
//! the report is always shown.

mod common;

use std::time::Instant;

use common::{
    loss_oracle, mae_oracle, plane_scene, psnr_oracle, random_image, rms, ssim_oracle, view_mean,
};
use lfref_core::bench::{linear_fit, run_bench, BenchConfig, BenchMethod, BenchRecord};
use lfref_core::fourier::{fft4, fourier_slice, refocus_fourier, FourierParams};
use lfref_core::io::{decode_lf, decode_spectrum, decode_stack, encode_lf, encode_spectrum, encode_stack};
use lfref_core::metrics::{
    laplacian_variance, psi1, psi2, psnr, ssim, stack_report, total_loss, LossParams, PsnrParams, SsimParams,
};
use lfref_core::shift_sum::{focal_stack_shift_sum, shift_and_sum, ShiftSumParams};
use lfref_core::{AlphaSet, FocalStack, ImageDims, ImagePlane, LfDims, LightField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ANCHOR_FIELDS: usize = 20;
const ANCHOR_FOURIER_RMS: f64 = 1e-4;
const ANCHOR_SECONDS: f64 = 10.0;
const CONSTANT_MAX_DEV: f32 = 1e-5;
const CROSS_BAND: f64 = 0.01;
const FOCUS_MAX_STEPS: usize = 1;
const METRIC_TOL: f64 = 1e-6;
const LOSS_FLOOR: f64 = 5.0;
const SHIFT_SUM_MIN_R2: f64 = 0.95;
const SLICE_MAX_VARIATION: f64 = 0.25;
const PRE_OVER_SLICE_MIN: f64 = 10.0;
const FORMAT_SHAPES: usize = 50;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn anchor() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for seed in 0..ANCHOR_FIELDS as u64 {
        let lf = LightField::random(LfDims::new(7, 7, 64, 64, 3), seed).map_err(|e| e.to_string())?;
        let mean = view_mean(&lf);
        let ss = shift_and_sum(&lf, &ShiftSumParams::new(1.0)).map_err(|e| e.to_string())?;
        if ss.samples() != &mean[..] {
            return Err(format!("field {seed}: shift-and-sum differs from the view mean"));
        }
        let fs = refocus_fourier(&lf, &AlphaSet::single(1.0).unwrap(), &FourierParams::default())
            .map_err(|e| e.to_string())?;
        worst = worst.max(rms(fs.images()[0].samples(), &mean));
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!("bit-exact x{ANCHOR_FIELDS}, fourier rms {worst:.2e}, {secs:.2} s");
    if worst <= ANCHOR_FOURIER_RMS && secs < ANCHOR_SECONDS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn constant_field() -> Outcome {
    let alphas = AlphaSet::default();
    let mut worst = 0.0f32;
    for value in [0.0f32, 0.37, 1.0] {
        let lf = LightField::constant(LfDims::new(7, 7, 32, 40, 3), value).unwrap();
        let ss = focal_stack_shift_sum(&lf, &alphas, &ShiftSumParams::default()).map_err(|e| e.to_string())?;
        let fs = refocus_fourier(&lf, &alphas, &FourierParams::default()).map_err(|e| e.to_string())?;
        if ss.len() != 16 || fs.len() != 16 {
            return Err("stack length is not 16".into());
        }
        for im in ss.images().iter().chain(fs.images()) {
            for &x in im.samples() {
                worst = worst.max((x - value).abs());
            }
        }
    }
    let detail = format!("max deviation {worst:.2e}");
    if worst < CONSTANT_MAX_DEV {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Cross-method RMS on plane scenes, frozen from the first run:
/// `(disparity, alpha, rms)`.
const CROSS_BASELINE: [(i64, f64, f64); 9] = [
    (-1, 0.5, 0.007944),
    (-1, 1.5, 0.011338),
    (-1, 2.0, 0.017090),
    (0, 0.5, 0.009269),
    (0, 1.5, 0.011632),
    (0, 2.0, 0.013016),
    (1, 0.5, 0.025779),
    (1, 1.5, 0.007472),
    (1, 2.0, 0.008706),
];

fn cross_method() -> Outcome {
    let dims = LfDims::new(7, 7, 64, 64, 3);
    let mut lines = Vec::new();
    let mut ok = true;
    for &(d, alpha, baseline) in &CROSS_BASELINE {
        let lf = plane_scene(dims, d, (100 + d) as u64);
        let spec = fft4(&lf);
        let a = shift_and_sum(&lf, &ShiftSumParams::new(alpha)).map_err(|e| e.to_string())?;
        let b = fourier_slice(&spec, alpha, &FourierParams::default()).map_err(|e| e.to_string())?;
        let r = rms(a.samples(), b.samples());
        let within = (r - baseline).abs() <= CROSS_BAND * baseline;
        ok &= within;
        lines.push(format!("d={d} a={alpha} rms={r:.6}{}", if within { "" } else { "!" }));
    }
    let detail = lines.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Grid index nearest to `1 / (1 + d)`; an infinite target maps to the last index.
fn target_index(alphas: &[f64], d: i64) -> usize {
    if d < 0 {
        return alphas.len() - 1;
    }
    let target = 1.0 / (1 + d) as f64;
    (0..alphas.len())
        .min_by(|&i, &j| (alphas[i] - target).abs().total_cmp(&(alphas[j] - target).abs()))
        .unwrap()
}

fn sharpest(stack: &FocalStack) -> usize {
    (0..stack.len())
        .max_by(|&i, &j| laplacian_variance(&stack.images()[i]).total_cmp(&laplacian_variance(&stack.images()[j])))
        .unwrap()
}

fn focus_oracle() -> Outcome {
    let alphas = AlphaSet::default();
    let dims = LfDims::new(7, 7, 64, 64, 3);
    let mut lines = Vec::new();
    let mut ok = true;
    for d in [-1i64, 0, 1] {
        let lf = plane_scene(dims, d, 7);
        let expect = target_index(alphas.as_slice(), d);
        let ss = focal_stack_shift_sum(&lf, &alphas, &ShiftSumParams::default()).map_err(|e| e.to_string())?;
        let fs = refocus_fourier(&lf, &alphas, &FourierParams::default()).map_err(|e| e.to_string())?;
        for (name, stack) in [("shift_sum", &ss), ("fourier", &fs)] {
            let got = sharpest(stack);
            let within = got.abs_diff(expect) <= FOCUS_MAX_STEPS;
            ok &= within;
            lines.push(format!("d={d} {name} best a={}{}", alphas.as_slice()[got], if within { "" } else { "!" }));
        }
    }
    let detail = lines.join(", ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn metric_parity() -> Outcome {
    let dims = ImageDims::new(32, 27, 3);
    let params = LossParams::default();
    let mut worst = 0.0f64;
    let mut truth = Vec::new();
    let mut pred = Vec::new();
    for seed in 0..8u64 {
        let a = random_image(dims, seed);
        let n = random_image(dims, seed + 1000);
        let amp = 0.05 * (seed + 1) as f32;
        let b = ImagePlane::from_fn(dims, |s, t, c| (a.get(s, t, c) + amp * (n.get(s, t, c) - 0.5)).clamp(0.0, 1.0))
            .unwrap();
        let e = |x: lfref_core::Result<f64>| x.map_err(|e| e.to_string());
        let s_o = ssim_oracle(&a, &b);
        let p_o = psnr_oracle(&a, &b);
        let psi1_o = params.beta * (1.0 - s_o) / 2.0 + (1.0 - params.beta) * mae_oracle(&a, &b);
        let diffs = [
            e(ssim(&a, &b, &params.ssim))? - s_o,
            e(psnr(&a, &b, &PsnrParams::default()))? - p_o,
            e(psi1(&a, &b, &params))? - psi1_o,
            e(psi2(&a, &b, &params))? - 1.0 / p_o,
            e(total_loss(&a, &b, &params))? - loss_oracle(&a, &b, params.beta, params.gamma),
        ];
        worst = diffs.iter().fold(worst, |m, d| m.max(d.abs()));
        truth.push(a);
        pred.push(b);
    }
    let alphas = AlphaSet::new((1..=8).map(|k| 0.25 * k as f64).collect()).unwrap();
    let truth = FocalStack::new(alphas.clone(), truth).unwrap();
    let pred = FocalStack::new(alphas, pred).unwrap();
    let report = stack_report(&pred, &truth, &SsimParams::default(), &PsnrParams::default()).map_err(|e| e.to_string())?;
    let m = report.per_alpha.len() as f64;
    let means_exact = report.mssim == report.per_alpha.iter().map(|r| r.ssim).sum::<f64>() / m
        && report.mpsnr == report.per_alpha.iter().map(|r| r.psnr_db).sum::<f64>() / m;
    let same = random_image(dims, 1);
    let floor = total_loss(&same, &same, &params).map_err(|e| e.to_string())?;
    let detail = format!("max oracle diff {worst:.2e}, means exact {means_exact}, floor {floor}");
    if worst <= METRIC_TOL && means_exact && floor == LOSS_FLOOR {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn seconds(records: &[BenchRecord], method: BenchMethod, dims: LfDims) -> f64 {
    records
        .iter()
        .find(|r| r.method == method && r.dims == dims)
        .map(|r| r.wall_seconds)
        .unwrap()
}

fn complexity() -> Outcome {
    let sweep: Vec<LfDims> = [3, 5, 7].iter().map(|&n| LfDims::new(n, n, 128, 128, 3)).collect();
    let records = run_bench(&BenchConfig {
        sizes: sweep.clone(),
        alphas: AlphaSet::new(vec![0.5, 0.75, 1.5, 2.0]).unwrap(),
        reps: 7,
        seed: 1,
        methods: vec![BenchMethod::ShiftSum, BenchMethod::FourierSlice],
        threads: Some(1),
    })
    .map_err(|e| e.to_string())?;
    let views: Vec<f64> = sweep.iter().map(|d| d.views() as f64).collect();
    let shift: Vec<f64> = sweep.iter().map(|&d| seconds(&records, BenchMethod::ShiftSum, d)).collect();
    let slice: Vec<f64> = sweep.iter().map(|&d| seconds(&records, BenchMethod::FourierSlice, d)).collect();
    let fit = linear_fit(&views, &shift);
    let (lo, hi) = slice.iter().fold((f64::MAX, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
    let variation = (hi - lo) / lo;

    let full = LfDims::new(7, 7, 375, 540, 3);
    let big = run_bench(&BenchConfig {
        sizes: vec![full],
        alphas: AlphaSet::new(vec![0.5, 1.5]).unwrap(),
        reps: 3,
        seed: 2,
        methods: vec![BenchMethod::FourierPre, BenchMethod::FourierSlice],
        threads: Some(1),
    })
    .map_err(|e| e.to_string())?;
    let ratio = seconds(&big, BenchMethod::FourierPre, full) / seconds(&big, BenchMethod::FourierSlice, full);

    let detail = format!(
        "shift-sum R2 {:.4}, slice variation {:.1}%, fft4/slice {:.1}x",
        fit.r_squared,
        100.0 * variation,
        ratio
    );
    if fit.r_squared > SHIFT_SUM_MIN_R2 && fit.slope > 0.0 && variation < SLICE_MAX_VARIATION && ratio >= PRE_OVER_SLICE_MIN {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn format_round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4c4652);
    for i in 0..FORMAT_SHAPES {
        // The first shapes pin the degenerate extents.
        let dims = match i {
            0 => LfDims::new(1, 1, 1, 1, 1),
            1 => LfDims::new(1, 7, 1, 9, 3),
            2 => LfDims::new(7, 1, 9, 1, 1),
            3 => LfDims::new(1, 1, 16, 16, 3),
            _ => LfDims::new(
                rng.random_range(1..=7),
                rng.random_range(1..=7),
                rng.random_range(1..=24),
                rng.random_range(1..=24),
                if rng.random_bool(0.5) { 1 } else { 3 },
            ),
        };
        let lf = LightField::random(dims, i as u64).unwrap();
        let back = encode_lf(&lf).and_then(|b| decode_lf(&b)).map_err(|e| e.to_string())?;
        if back.samples().iter().map(|x| x.to_bits()).ne(lf.samples().iter().map(|x| x.to_bits())) || back != lf {
            return Err(format!("LFR1 light field {dims}"));
        }
        let m = rng.random_range(1..=16);
        let mut acc = 0.0;
        let alphas: Vec<f64> = (0..m)
            .map(|_| {
                acc += rng.random_range(0.05..0.25);
                acc
            })
            .collect();
        let alphas = AlphaSet::new(alphas).unwrap();
        let images = (0..m).map(|_| random_image(dims.image_dims(), rng.random())).collect();
        let stack = FocalStack::new(alphas, images).unwrap();
        if encode_stack(&stack).and_then(|b| decode_stack(&b)).map_err(|e| e.to_string())? != stack {
            return Err(format!("LFR1 stack {dims} x{m}"));
        }
        let spec = fft4(&lf);
        if encode_spectrum(&spec).and_then(|b| decode_spectrum(&b)).map_err(|e| e.to_string())? != spec {
            return Err(format!("LFS1 {dims}"));
        }
    }
    Ok(format!("{FORMAT_SHAPES} shapes, light field + stack + spectrum"))
}

fn main() -> std::process::ExitCode {
    let criteria: [Criterion; 7] = [
        ("alpha-1 anchor", anchor),
        ("constant-field invariance", constant_field),
        ("cross-method agreement", cross_method),
        ("focus oracle", focus_oracle),
        ("metric parity", metric_parity),
        ("complexity", complexity),
        ("format round-trips", format_round_trips),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                println!("FAIL {name}: {detail}");
                failed.push(name);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} criteria passed", criteria.len());
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
