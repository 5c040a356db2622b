//! Timing harness for the refocusing methods on synthetic light fields.

use std::fmt::{self, Write as _};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fourier::{fft4, fourier_slice, FourierParams};
use crate::lightfield::{AlphaSet, LfDims, LightField};
use crate::metrics::fmt_sig9;
use crate::shift_sum::{shift_and_sum, ShiftSumParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchMethod {
    /// One shift-and-sum image.
    ShiftSum,
    /// The 4-D transform of all channels.
    FourierPre,
    /// One Fourier slice image from an existing spectrum.
    FourierSlice,
}

impl BenchMethod {
    pub const ALL: [BenchMethod; 3] = [
        BenchMethod::FourierPre,
        BenchMethod::FourierSlice,
        BenchMethod::ShiftSum,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BenchMethod::ShiftSum => "shift_sum",
            BenchMethod::FourierPre => "fourier_pre",
            BenchMethod::FourierSlice => "fourier_slice",
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Median wall time of one operation over `repetitions` runs.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub method: BenchMethod,
    pub dims: LfDims,
    pub alphas: usize,
    pub wall_seconds: f64,
    pub repetitions: usize,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub sizes: Vec<LfDims>,
    pub alphas: AlphaSet,
    pub reps: usize,
    pub seed: u64,
    pub methods: Vec<BenchMethod>,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![LfDims::new(7, 7, 128, 128, 3)],
            alphas: AlphaSet::default(),
            reps: 3,
            seed: 0,
            methods: BenchMethod::ALL.to_vec(),
            threads: None,
        }
    }
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(|a, b| a.total_cmp(b));
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

fn seconds_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64().max(1e-9)
}

fn bench_one(dims: LfDims, cfg: &BenchConfig, seed: u64) -> Result<Vec<BenchRecord>> {
    let lf = LightField::random(dims, seed)?;
    let alphas = cfg.alphas.as_slice();
    let fparams = FourierParams::default();
    let spectrum = fft4(&lf);
    let mut records = Vec::new();
    for &method in &cfg.methods {
        let mut times = Vec::with_capacity(cfg.reps);
        for _ in 0..cfg.reps {
            let t = match method {
                BenchMethod::FourierPre => {
                    let start = Instant::now();
                    std::hint::black_box(fft4(&lf));
                    seconds_since(start)
                }
                BenchMethod::FourierSlice => {
                    let start = Instant::now();
                    for &a in alphas {
                        std::hint::black_box(fourier_slice(&spectrum, a, &fparams)?);
                    }
                    seconds_since(start) / alphas.len() as f64
                }
                BenchMethod::ShiftSum => {
                    let start = Instant::now();
                    for &a in alphas {
                        std::hint::black_box(shift_and_sum(&lf, &ShiftSumParams::new(a))?);
                    }
                    seconds_since(start) / alphas.len() as f64
                }
            };
            times.push(t);
        }
        records.push(BenchRecord {
            method,
            dims,
            alphas: alphas.len(),
            wall_seconds: median(&mut times),
            repetitions: cfg.reps,
        });
    }
    Ok(records)
}

/// Times every configured method on a random field of every configured size.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    if cfg.reps < 3 {
        return Err(Error::InvalidParam(format!(
            "at least 3 repetitions are required, got {}",
            cfg.reps
        )));
    }
    let run = || -> Result<Vec<BenchRecord>> {
        let mut all = Vec::new();
        for (i, &dims) in cfg.sizes.iter().enumerate() {
            all.extend(bench_one(dims, cfg, cfg.seed.wrapping_add(i as u64))?);
        }
        Ok(all)
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidParam(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

pub const BENCH_CSV_SCHEMA: &str = "# lfref bench v1";

pub fn records_csv(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    writeln!(out, "{BENCH_CSV_SCHEMA}").unwrap();
    writeln!(out, "method,u,v,s,t,c,alphas,wall_seconds,repetitions").unwrap();
    for r in records {
        let d = r.dims;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.method,
            d.u,
            d.v,
            d.s,
            d.t,
            d.c,
            r.alphas,
            fmt_sig9(r.wall_seconds),
            r.repetitions
        )
        .unwrap();
    }
    out
}

/// Per size: preprocessing over one slice, and one shift-and-sum image over one slice.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRatios {
    pub dims: LfDims,
    pub pre_over_slice: Option<f64>,
    pub shift_over_slice: Option<f64>,
}

pub fn ratios(records: &[BenchRecord]) -> Vec<BenchRatios> {
    let mut dims_seen: Vec<LfDims> = Vec::new();
    for r in records {
        if !dims_seen.contains(&r.dims) {
            dims_seen.push(r.dims);
        }
    }
    dims_seen
        .into_iter()
        .map(|dims| {
            let get = |m: BenchMethod| {
                records
                    .iter()
                    .find(|r| r.dims == dims && r.method == m)
                    .map(|r| r.wall_seconds)
            };
            let slice = get(BenchMethod::FourierSlice);
            BenchRatios {
                dims,
                pre_over_slice: get(BenchMethod::FourierPre).zip(slice).map(|(p, s)| p / s),
                shift_over_slice: get(BenchMethod::ShiftSum).zip(slice).map(|(p, s)| p / s),
            }
        })
        .collect()
}

pub fn ratios_csv(ratios: &[BenchRatios]) -> String {
    let opt = |x: Option<f64>| x.map(fmt_sig9).unwrap_or_default();
    let mut out = String::new();
    writeln!(out, "# lfref bench-ratios v1").unwrap();
    writeln!(out, "u,v,s,t,c,pre_over_slice,shift_over_slice").unwrap();
    for r in ratios {
        let d = r.dims;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            d.u,
            d.v,
            d.s,
            d.t,
            d.c,
            opt(r.pre_over_slice),
            opt(r.shift_over_slice)
        )
        .unwrap();
    }
    out
}

/// Least-squares line with its coefficient of determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    LinearFit {
        slope,
        intercept,
        r_squared,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_exact_line() {
        let fit = linear_fit(&[9.0, 25.0, 49.0], &[1.0 + 2.0 * 9.0, 1.0 + 2.0 * 25.0, 1.0 + 2.0 * 49.0]);
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-9);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn median_odd_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn rejects_too_few_reps() {
        let cfg = BenchConfig {
            reps: 2,
            ..Default::default()
        };
        assert!(run_bench(&cfg).is_err());
    }

    #[test]
    fn small_run_produces_all_records() {
        let cfg = BenchConfig {
            sizes: vec![LfDims::new(3, 3, 16, 16, 1)],
            alphas: AlphaSet::new(vec![0.5, 1.0]).unwrap(),
            threads: Some(1),
            ..Default::default()
        };
        let recs = run_bench(&cfg).unwrap();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.wall_seconds > 0.0 && r.repetitions == 3 && r.alphas == 2));
        let csv = records_csv(&recs);
        assert_eq!(csv.lines().count(), 5);
        let rat = ratios(&recs);
        assert_eq!(rat.len(), 1);
        assert!(rat[0].pre_over_slice.is_some() && rat[0].shift_over_slice.is_some());
        assert!(ratios_csv(&rat).lines().nth(2).unwrap().starts_with("3,3,16,16,1,"));
    }
}
