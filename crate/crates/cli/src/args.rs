use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub const SUBCOMMANDS: [&str; 5] = ["build", "convolve", "verify", "sweep", "render"];

#[derive(Parser, Debug)]
#[command(
    name = "shearconv",
    version,
    about = "Shear-constructed harmonic maps, their convolutions and numerical checks"
)]
pub struct Cli {
    /// Truncation order of the power series.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Flat `key=value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family by shear and write its coefficient table.
    Build(FamilyArgs),
    /// Convolve two maps and write the coefficient table of the result.
    Convolve(ConvolveArgs),
    /// Run the checks of a theorem preset, or generic checks on one map.
    Verify(VerifyArgs),
    /// Run a theorem preset over a parameter grid.
    Sweep(SweepArgs),
    /// Draw images of circles and radii under a map as SVG.
    Render(RenderArgs),
}

/// A family given by kind plus flags, or as `kind(key=value,...)`.
#[derive(Args, Debug, Default, Clone)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    /// Left family as `kind(key=value,...)`.
    #[arg(long, conflicts_with = "left_input")]
    pub left: Option<String>,
    /// Right family as `kind(key=value,...)`.
    #[arg(long, conflicts_with = "right_input")]
    pub right: Option<String>,
    /// Left map as a coefficient table.
    #[arg(long)]
    pub left_input: Option<PathBuf>,
    /// Right map as a coefficient table.
    #[arg(long)]
    pub right_input: Option<PathBuf>,
}

/// Sampling grid flags shared by verify and sweep.
#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Comma-separated radii, strictly increasing in (0, 1).
    #[arg(long)]
    pub radii: Option<String>,
    /// Samples per grid circle.
    #[arg(long)]
    pub angles: Option<usize>,
    /// Radius of the boundary curve for the convexity check.
    #[arg(long, default_value_t = 0.99)]
    pub radius: f64,
    /// Samples on the boundary curve.
    #[arg(long, default_value_t = 8192)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Theorem preset: t2.3, t3.2, t1.3 ... t1.9.
    #[arg(long, conflicts_with_all = ["input", "family"])]
    pub theorem: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = angle, conflicts_with_all = ["beta", "psi"])]
    pub eta: Option<f64>,
    /// Strip angle; same slot as `--eta`.
    #[arg(long, allow_hyphen_values = true, value_parser = angle, conflicts_with = "psi")]
    pub beta: Option<f64>,
    /// Strip angle of the cusp preset; same slot as `--eta`.
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub psi: Option<f64>,
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub n: Option<u32>,
    /// Check a map read from a coefficient table instead of a preset.
    #[arg(long, conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Check a family given as `kind(key=value,...)` instead of a preset.
    #[arg(long)]
    pub family: Option<String>,
    /// Direction for the convexity check of `--input`/`--family` maps.
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub direction: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub theorem: String,
    /// Each parameter takes a value, a `start:stop:step` range or a
    /// comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["beta", "psi"])]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "psi")]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Map read from a coefficient table instead of a family.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 24)]
    pub radial_lines: usize,
    #[arg(long, default_value_t = 12)]
    pub circles: usize,
    #[arg(long, default_value_t = 0.99)]
    pub max_radius: f64,
    #[arg(long, default_value_t = 720)]
    pub samples: usize,
    /// Overlay lines parallel to `e^{iψ}`.
    #[arg(long, allow_hyphen_values = true, value_parser = angle)]
    pub guide: Option<f64>,
    #[arg(long, default_value_t = 800)]
    pub width: u32,
    #[arg(long, default_value_t = 800)]
    pub height: u32,
    #[arg(long, default_value = "#1f4e79")]
    pub stroke: String,
    /// Stroke width in pixels.
    #[arg(long, default_value_t = 1.0)]
    pub stroke_width: f64,
    #[arg(long, default_value = "#c0392b")]
    pub guide_stroke: String,
}

fn angle(s: &str) -> Result<f64, String> {
    shearconv_core::parse_angle(s).map_err(|e| e.to_string())
}
