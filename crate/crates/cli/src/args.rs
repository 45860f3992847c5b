//! Command-line arguments and grid parsing.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;
use crate::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "rsm", version = crate::VERSION, about = "Random subsequence model: counts, curves and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Report free energies and capacities in bits instead of nats.
    #[arg(long, global = true)]
    pub bits: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of embeddings of Y into X, and its natural logarithm.
    Count {
        /// Ambient string over {0,1}.
        x: String,
        /// Subsequence over {0,1}; may be empty.
        y: String,
    },
    /// Capacity bounds and the planted estimate against deletion probability.
    Figure1(CurveArgs),
    /// Strict-weak polymer against the null estimate over densities in (0, 1/2].
    Figure2(CurveArgs),
    /// Oracle checks of every module; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Frequency of well-aligned pairs under the planted and null laws.
    AlignmentExperiment(AlignmentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    pub grid: Option<String>,
    /// Ambient length N.
    #[arg(long, short = 'n', default_value_t = 10_000)]
    pub length: usize,
    /// Disorder samples per grid point.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
    /// Also write an SVG chart.
    #[arg(long)]
    pub plot: bool,
    /// Destination of the SVG chart.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Fast,
    Full,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Level::Fast)]
    pub level: Level,
    /// Shifts every reference value; a nonzero shift must make the run fail.
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
}

#[derive(Debug, Clone, Args)]
pub struct AlignmentArgs {
    /// Density of the subsequence.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Block length b.
    #[arg(long, short = 'b', default_value_t = 64)]
    pub block: usize,
    /// Ambient length N, a multiple of b.
    #[arg(long, short = 'n', default_value_t = 6400)]
    pub length: usize,
    /// Pairs drawn under each law.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Window exponent; the default is 1/24.
    #[arg(long)]
    pub epsilon: Option<f64>,
}

/// Parses `start:stop:step` (inclusive of `stop`) or `a,b,c`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    let bad = |why: &str| CliError::Usage(format!("invalid grid {spec:?}: {why}"));
    if spec.is_empty() {
        return Err(bad("empty"));
    }
    let number = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("not a number"));
    let values: Vec<f64> = if spec.contains(':') {
        let parts: Vec<f64> = spec.split(':').map(number).collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad("expected start:stop:step")) };
        if step <= 0.0 || stop < start {
            return Err(bad("step must be positive and stop at least start"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|k| round_grid(start + k as f64 * step)).collect()
    } else {
        spec.split(',').map(number).collect::<Result<_>>()?
    };
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(bad("values must be strictly increasing"));
    }
    Ok(values)
}

fn round_grid(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}
