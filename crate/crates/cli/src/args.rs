use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lfref_core::{AlphaSet, Boundary, LfDims};

#[derive(Parser, Debug)]
#[command(name = "lfref", version, about = "Light field refocusing pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Assemble an LFR1 light field from sub-aperture view images.
    Import(ImportArgs),
    /// Refocus one light field into a focal stack.
    Refocus(RefocusArgs),
    /// Generate label stacks for every entry of a dataset manifest.
    Labels(LabelsArgs),
    /// Export aligned light field / label patches for training.
    Patches(PatchesArgs),
    /// PSNR/SSIM report of predicted stacks against reference stacks.
    Metrics(MetricsArgs),
    /// Per-alpha loss components of one predicted stack.
    Loss(LossArgs),
    /// Time the refocusing methods on synthetic fields.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Method {
    ShiftSum,
    Fourier,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ShiftSum => "shift_sum",
            Method::Fourier => "fourier",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Clamp,
    Zero,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Clamp => Boundary::ClampEdge,
            BoundaryArg::Zero => Boundary::ZeroRenorm,
        }
    }
}

/// Refocusing options shared by `refocus` and `labels`.
#[derive(Args, Debug, Clone)]
pub struct RefocusOptions {
    #[arg(long, value_enum, value_name = "METHOD")]
    pub method: Method,
    /// Comma separated focal parameters, strictly increasing.
    #[arg(long, value_parser = parse_alphas, default_value = "0.125,0.25,0.375,0.5,0.625,0.75,0.875,1,1.125,1.25,1.375,1.5,1.625,1.75,1.875,2")]
    pub alphas: AlphaSet,
    /// Disparity scale in pixels per angular step.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    /// Out-of-range sampling for shift-and-sum.
    #[arg(long, value_enum, default_value = "clamp")]
    pub boundary: BoundaryArg,
}

#[derive(Args, Debug)]
pub struct ImportArgs {
    /// Directory holding the view images.
    #[arg(long)]
    pub dir: PathBuf,
    /// JSON list of `{"u", "v", "file"}` entries; defaults to `<dir>/views.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Angular grid `UxV`; indices outside it are rejected.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<(usize, usize)>,
    /// Center crop `UxVxSxT` applied after assembly.
    #[arg(long, value_parser = parse_crop)]
    pub crop: Option<[usize; 4]>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RefocusArgs {
    /// LFR1 light field.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub opts: RefocusOptions,
    /// Output LFR1 focal stack.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write one 8-bit PNG per alpha into this directory.
    #[arg(long)]
    pub png_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LabelsArgs {
    /// Dataset manifest JSON.
    #[arg(long)]
    pub manifest: PathBuf,
    #[command(flatten)]
    pub opts: RefocusOptions,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    Train,
    Test,
}

#[derive(Args, Debug)]
pub struct PatchesArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory of `<id>.lfr` label stacks.
    #[arg(long)]
    pub labels: PathBuf,
    /// Patches per light field.
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Spatial side of each patch.
    #[arg(long, default_value_t = 192)]
    pub size: usize,
    /// Only use manifest entries of this split.
    #[arg(long, value_enum)]
    pub split: Option<SplitArg>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct MetricsArgs {
    /// Directory of predicted `<id>.lfr` stacks.
    #[arg(long)]
    pub pred: PathBuf,
    /// Directory of reference `<id>.lfr` stacks.
    #[arg(long)]
    pub truth: PathBuf,
    /// Summary CSV; per-alpha details go to `<out>.details/`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct LossArgs {
    /// Predicted LFR1 stack.
    #[arg(long)]
    pub pred: PathBuf,
    /// Reference LFR1 stack.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long, default_value_t = 0.65)]
    pub beta: f64,
    #[arg(long, default_value_t = 500.0)]
    pub gamma: f64,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma separated `UxVxSxTxC` sizes.
    #[arg(long, value_parser = parse_dims, value_delimiter = ',', default_value = "7x7x128x128x3")]
    pub sizes: Vec<LfDims>,
    #[arg(long, value_parser = parse_alphas, default_value = "0.125,0.25,0.375,0.5,0.625,0.75,0.875,1,1.125,1.25,1.375,1.5,1.625,1.75,1.875,2")]
    pub alphas: AlphaSet,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Records CSV; ratios go to the same path with a `.ratios.csv` suffix.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn parse_alphas(s: &str) -> Result<AlphaSet, String> {
    s.parse().map_err(|e: lfref_core::Error| e.to_string())
}

fn parse_extents<const N: usize>(s: &str) -> Result<[usize; N], String> {
    let parts: Vec<&str> = s.split('x').collect();
    if parts.len() != N {
        return Err(format!("expected {N} extents separated by 'x', got {s:?}"));
    }
    let mut out = [0usize; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p
            .trim()
            .parse()
            .map_err(|e| format!("{p:?}: {e}"))?;
        if *slot == 0 {
            return Err(format!("extents must be positive in {s:?}"));
        }
    }
    Ok(out)
}

pub fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    parse_extents::<2>(s).map(|[u, v]| (u, v))
}

pub fn parse_crop(s: &str) -> Result<[usize; 4], String> {
    parse_extents::<4>(s)
}

pub fn parse_dims(s: &str) -> Result<LfDims, String> {
    let [u, v, ss, t, c] = parse_extents::<5>(s)?;
    let dims = LfDims::new(u, v, ss, t, c);
    dims.validate().map_err(|e| e.to_string())?;
    Ok(dims)
}
