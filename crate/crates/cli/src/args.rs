use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrdim::dimension::{make_log_r_grid, RegionSearch};
use corrdim::preprocess::{FilterSpec, NormalizationMode, Preprocessing};
use corrdim::{DistanceMetric, Kernel};

/// Sampling rate of the Bonn EEG segments, used when none is given.
pub const DEFAULT_SAMPLE_RATE: f64 = 173.61;

pub const SCAN_THRESHOLDS: [f64; 8] = [0.0005, 0.0007, 0.001, 0.002, 0.003, 0.005, 0.007, 0.01];

#[derive(Debug, Parser)]
#[command(name = "corrdim", version, about = "Correlation dimension of time series")]
pub struct Cli {
    /// Worker threads for pairwise computations.
    #[arg(long, global = true, env = "CORRDIM_WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlation-integral grid over m and r.
    Ci(CiArgs),
    /// Correlation dimension per m from the log-log slope.
    Cd(CdArgs),
    /// Paired comparison of both kernels at one (m, r).
    Compare(CompareArgs),
    /// Paired comparison over a list of thresholds.
    Scan(ScanArgs),
    /// Pairwise distance matrix as a PGM image.
    Heatmap(HeatmapArgs),
    /// Generate a reference signal.
    Synth(SynthArgs),
    /// Dump delay vectors as CSV.
    Embed(EmbedArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KernelArg {
    Cd,
    Mcd,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Cd => Kernel::Heaviside,
            KernelArg::Mcd => Kernel::Exponential,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Chebyshev,
    Manhattan,
}

impl From<MetricArg> for DistanceMetric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Euclidean => DistanceMetric::Euclidean,
            MetricArg::Chebyshev => DistanceMetric::Chebyshev,
            MetricArg::Manhattan => DistanceMetric::Manhattan,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NormArg {
    L1,
    Minmax,
    None,
}

impl From<NormArg> for NormalizationMode {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::L1 => NormalizationMode::L1Signal,
            NormArg::Minmax => NormalizationMode::MinMax01,
            NormArg::None => NormalizationMode::None,
        }
    }
}

#[derive(Debug, Args)]
pub struct PreArgs {
    /// Low-pass cutoff in Hz; 0 disables the filter.
    #[arg(long, default_value_t = 60.0, value_parser = non_negative)]
    pub cutoff: f64,

    /// Width of the filter's transition band in Hz.
    #[arg(long, default_value_t = 10.0, value_parser = positive)]
    pub transition: f64,

    #[arg(long, value_enum, default_value = "l1")]
    pub norm: NormArg,
}

impl PreArgs {
    pub fn preprocessing(&self) -> Preprocessing {
        Preprocessing {
            filter: (self.cutoff > 0.0).then(|| FilterSpec::new(self.cutoff, self.transition)),
            normalization: self.norm.into(),
        }
    }
}

#[derive(Debug, Args)]
pub struct SignalArgs {
    /// ASCII signal, one sample per line.
    pub input: PathBuf,

    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE, value_parser = positive)]
    pub sample_rate: f64,

    #[command(flatten)]
    pub pre: PreArgs,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value_t = 1e-4, value_parser = positive)]
    pub r_min: f64,

    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub r_max: f64,

    #[arg(long, default_value_t = 41, value_parser = clap::value_parser!(u32).range(2..))]
    pub r_points: u32,

    /// Explicit comma-separated thresholds instead of a log grid.
    #[arg(long, value_parser = parse_thresholds, conflicts_with_all = ["r_min", "r_max", "r_points"])]
    pub r_values: Option<Thresholds>,
}

impl ThresholdArgs {
    pub fn values(&self) -> corrdim::Result<Vec<f64>> {
        match &self.r_values {
            Some(t) => Ok(t.0.clone()),
            None => Ok(make_log_r_grid(self.r_min, self.r_max, self.r_points as usize)?.values),
        }
    }
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub signal: SignalArgs,

    #[arg(long, value_enum, default_value = "mcd")]
    pub kernel: KernelArg,

    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,

    /// Embedding dimensions: a range `lo..hi` (inclusive) or a comma list.
    #[arg(long = "m", default_value = "1..20", value_parser = parse_m_list)]
    pub m: MList,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub lag: u32,

    /// Use the vector count of the largest m for every m.
    #[arg(long)]
    pub fixed_count: bool,

    #[command(flatten)]
    pub thresholds: ThresholdArgs,

    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CiArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    /// Also write the filter taps to `taps.csv`.
    #[arg(long)]
    pub taps: bool,
}

#[derive(Debug, Args)]
pub struct ScalingArgs {
    /// Points in the scaling-region window.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(3..))]
    pub window: u32,

    /// Windows with mean C above this level are skipped.
    #[arg(long, default_value_t = 0.9, value_parser = unit_interval)]
    pub saturation: f64,
}

impl ScalingArgs {
    pub fn search(&self) -> RegionSearch {
        RegionSearch {
            window: self.window as usize,
            saturation: self.saturation,
        }
    }
}

#[derive(Debug, Args)]
pub struct CdArgs {
    #[command(flatten)]
    pub grid: GridArgs,

    #[command(flatten)]
    pub scaling: ScalingArgs,

    /// Treat the input as a previously written `grid.csv` and only fit it.
    #[arg(long)]
    pub from_grid: bool,
}

#[derive(Debug, Args)]
pub struct PairedArgs {
    /// JSON manifest listing the signal pairs.
    pub manifest: PathBuf,

    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,

    #[arg(long = "m", default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub lag: u32,

    #[command(flatten)]
    pub pre: PreArgs,

    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub paired: PairedArgs,

    #[arg(long, default_value_t = 0.003, value_parser = positive)]
    pub r: f64,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub paired: PairedArgs,

    /// Comma-separated thresholds (default 0.0005 to 0.01 in 8 steps).
    #[arg(long, value_parser = parse_thresholds)]
    pub r_values: Option<Thresholds>,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub signal: SignalArgs,

    #[arg(long, value_enum, default_value = "euclidean")]
    pub metric: MetricArg,

    #[arg(long = "m", default_value_t = 15, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub lag: u32,

    /// Dark pixels for near pairs.
    #[arg(long)]
    pub invert: bool,

    /// Also write the matrix as `dij.csv`.
    #[arg(long)]
    pub csv: bool,

    /// Refuse inputs with more delay vectors than this.
    #[arg(long, default_value_t = corrdim::corrint::DEFAULT_MATRIX_CAP)]
    pub max_vectors: usize,

    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub signal: SignalArgs,

    #[arg(long = "m", default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    pub m: u32,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub lag: u32,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SynthKind {
    Logistic,
    Henon,
    Sine,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub kind: SynthKind,

    #[arg(long, default_value_t = 1000)]
    pub n: usize,

    #[arg(long, default_value_t = 4.0)]
    pub mu: f64,

    /// Initial value (default 0.3 for logistic, 0 for henon).
    #[arg(long)]
    pub x0: Option<f64>,

    #[arg(long, default_value_t = 1.4)]
    pub a: f64,

    #[arg(long, default_value_t = 0.3)]
    pub b: f64,

    #[arg(long, default_value_t = 0.0)]
    pub y0: f64,

    #[arg(long, default_value_t = corrdim::signal_io::HENON_DEFAULT_BURN_IN)]
    pub burn_in: usize,

    #[arg(long, default_value_t = 1.0)]
    pub freq: f64,

    #[arg(long, default_value_t = DEFAULT_SAMPLE_RATE)]
    pub sample_rate: f64,

    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MList(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholds(pub Vec<f64>);

fn parse_m_list(s: &str) -> Result<MList, String> {
    let parse = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(0) => Err("embedding dimensions start at 1".into()),
            Ok(v) => Ok(v),
            Err(_) => Err(format!("`{t}` is not a positive integer")),
        }
    };
    let values = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (parse(lo)?, parse(hi)?);
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        (lo..=hi).collect()
    } else {
        let v: Vec<usize> = s.split(',').map(parse).collect::<Result<_, _>>()?;
        if v.windows(2).any(|w| w[0] >= w[1]) {
            return Err("dimensions must be strictly increasing".into());
        }
        v
    };
    Ok(MList(values))
}

fn parse_thresholds(s: &str) -> Result<Thresholds, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| positive(t.trim()))
        .collect::<Result<_, _>>()?;
    if v.windows(2).any(|w| w[0] >= w[1]) {
        return Err("thresholds must be strictly increasing".into());
    }
    Ok(Thresholds(v))
}

fn number(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must not be negative"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let v = number(s)?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} must lie in (0, 1]"))
    }
}
