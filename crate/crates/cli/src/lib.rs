//! Command-line front end for the random subsequence model toolkit.
//!
//! Every subcommand builds a [`output::Report`] and renders it as CSV or JSON.
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage error.

pub mod args;
pub mod commands;
pub mod output;
pub mod svg;
pub mod verify;

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use args::{Cli, Command, Common};
use output::{Report, Unit};

/// Version string with the `git describe` suffix when built from a checkout.
pub const VERSION: &str = env!("RSM_VERSION");

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rsm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{failed} of {total} checks failed")]
    VerificationFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use rsm_core::Error as E;
        match self {
            Self::Usage(_) => 2,
            Self::Core(
                E::InvalidDimensions { .. }
                | E::InvalidBlockLength { .. }
                | E::InvalidBitString(_)
                | E::OutOfDomain { .. }
                | E::InvalidGrid(_)
                | E::InvalidSampleSize(_),
            ) => 2,
            Self::Core(_) | Self::Io(_) | Self::VerificationFailed { .. } => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Sizes the global worker pool from `RSM_THREADS` when it is set.
pub fn configure_threads(value: Option<&str>) -> Result<()> {
    let Some(raw) = value else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("RSM_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure worker pool: {e}")))
}

fn emit(report: &Report, common: &Common) -> Result<()> {
    let text = report.render(common.format);
    match &common.output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_svg(path: Option<&Path>, default: &str, chart: &svg::Chart) -> Result<()> {
    let path = path.map_or_else(|| PathBuf::from(default), Path::to_path_buf);
    fs::write(path, chart.render())?;
    Ok(())
}

/// Executes one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    let common = &cli.common;
    let unit = Unit::from_bits_flag(common.bits);
    match &cli.command {
        Command::Count { x, y } => emit(&commands::count(x, y, unit)?, common),
        Command::Figure1(args) => {
            let (report, chart) = commands::figure1(args, common.seed, unit)?;
            emit(&report, common)?;
            if args.plot {
                write_svg(args.svg.as_deref(), "figure1.svg", &chart)?;
            }
            Ok(())
        }
        Command::Figure2(args) => {
            let (report, chart) = commands::figure2(args, common.seed, unit)?;
            emit(&report, common)?;
            if args.plot {
                write_svg(args.svg.as_deref(), "figure2.svg", &chart)?;
            }
            Ok(())
        }
        Command::Verify(args) => {
            let checks = verify::run_checks(args.level, args.perturb, common.seed);
            emit(&verify::report(&checks, args.level, common.seed), common)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CliError::VerificationFailed { failed, total: checks.len() });
            }
            Ok(())
        }
        Command::AlignmentExperiment(args) => emit(&commands::alignment_experiment(args, common.seed)?, common),
    }
}
