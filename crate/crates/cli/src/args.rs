use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use salttrack_core::tracker::{TrackingMode, Variant};

use crate::render::Rgb;

#[derive(Debug, Parser)]
#[command(
    name = "salttrack",
    version,
    about = "Track salt-dome boundaries through seismic volumes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic volume with ground-truth boundaries.
    Synth(SynthArgs),
    /// Compute the GLCM contrast map of one inline.
    Attribute(AttributeArgs),
    /// Track a labeled boundary into neighboring inlines.
    Track(TrackArgs),
    /// Compare tracked boundaries with ground truth.
    Evaluate(EvaluateArgs),
    /// Draw boundaries over a section.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output volume directory; truth CSVs go to `<out>/truth`.
    #[arg(long)]
    pub out: PathBuf,
    /// Start from the high-noise preset used for variant comparison.
    #[arg(long)]
    pub textured: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Dome drift along the crossline axis, px per inline.
    #[arg(long)]
    pub drift: Option<f64>,
    #[arg(long)]
    pub noise: Option<f64>,
    /// Volume size as INLINESxCROSSLINESxSAMPLES.
    #[arg(long, value_parser = parse_dims3)]
    pub dims: Option<(usize, usize, usize)>,
    #[arg(long)]
    pub inline_start: Option<i64>,
}

#[derive(Debug, Clone, Args)]
pub struct GlcmArgs {
    /// GLCM window radius (window side 2R+1).
    #[arg(long, default_value_t = 4)]
    pub radius: usize,
    /// Gray-level quantization count.
    #[arg(long, default_value_t = 32)]
    pub levels: usize,
}

#[derive(Debug, Args)]
pub struct AttributeArgs {
    #[arg(long)]
    pub volume: PathBuf,
    #[arg(long)]
    pub inline: i64,
    #[command(flatten)]
    pub glcm: GlcmArgs,
    /// Output grid directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the map as a PPM raster.
    #[arg(long)]
    pub render: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrackArgs {
    #[arg(long)]
    pub volume: PathBuf,
    /// Labeled boundary CSV on the reference inline.
    #[arg(long)]
    pub boundary: PathBuf,
    #[arg(long)]
    pub reference: i64,
    /// Inclusive inline range, `A..B`.
    #[arg(long, value_parser = parse_range)]
    pub range: RangeInclusive<i64>,
    #[arg(long, default_value = "full")]
    pub variant: Variant,
    #[arg(long, value_enum, default_value = "anchored")]
    pub mode: ModeArg,
    /// Patch size `I1xI2`.
    #[arg(long, value_parser = parse_dims2, default_value = "31x31")]
    pub patch: (usize, usize),
    /// Subspace dimensions `P1,P2,P3`.
    #[arg(long, value_parser = parse_subspace, default_value = "15,15,5")]
    pub subspace: (usize, usize, usize),
    /// Classification threshold on the reconstruction error.
    #[arg(long, default_value_t = 3.0)]
    pub threshold: f64,
    /// Fixed contrast weight replacing `|ln C|`.
    #[arg(long)]
    pub contrast_weight: Option<f64>,
    #[command(flatten)]
    pub glcm: GlcmArgs,
    /// Directory of ground-truth CSVs; adds similarity results to the manifest.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub segments: usize,
    /// Worker threads for per-section tracking.
    #[arg(long, env = "SALTTRACK_JOBS")]
    pub jobs: Option<usize>,
    /// Write a PPM overlay (projected blue, tracked green) per inline.
    #[arg(long)]
    pub render: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Anchored,
    Chained,
}

impl From<ModeArg> for TrackingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Anchored => TrackingMode::Anchored,
            ModeArg::Chained => TrackingMode::Chained,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Tracked boundary CSV, or a directory of them.
    #[arg(long)]
    pub tracked: PathBuf,
    /// Ground-truth CSV, or a directory of them.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub segments: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub volume: PathBuf,
    #[arg(long)]
    pub inline: i64,
    /// Boundary CSV to draw; repeatable.
    #[arg(long = "boundary")]
    pub boundaries: Vec<PathBuf>,
    /// Color for the boundary at the same position; repeatable.
    #[arg(long = "color")]
    pub colors: Vec<Rgb>,
    /// Draw the contrast map instead of the amplitudes.
    #[arg(long)]
    pub contrast: bool,
    #[command(flatten)]
    pub glcm: GlcmArgs,
    /// Output PPM raster.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional SVG overlay of the boundaries.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected A..B, got '{s}'"))?;
    let a: i64 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad range start '{a}'"))?;
    let b: i64 = b
        .trim()
        .parse()
        .map_err(|_| format!("bad range end '{b}'"))?;
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(a..=b)
}

fn parse_list(s: &str, n: usize) -> Result<Vec<usize>, String> {
    let parts: Vec<&str> = s.split(['x', 'X', ',']).collect();
    if parts.len() != n {
        return Err(format!("expected {n} values, got '{s}'"));
    }
    parts
        .iter()
        .map(|p| p.trim().parse().map_err(|_| format!("bad value '{p}'")))
        .collect()
}

pub fn parse_dims2(s: &str) -> Result<(usize, usize), String> {
    let v = parse_list(s, 2)?;
    Ok((v[0], v[1]))
}

pub fn parse_dims3(s: &str) -> Result<(usize, usize, usize), String> {
    let v = parse_list(s, 3)?;
    Ok((v[0], v[1], v[2]))
}

pub fn parse_subspace(s: &str) -> Result<(usize, usize, usize), String> {
    parse_dims3(s)
}
