//! Subcommands that produce tabular reports.

use rayon::prelude::*;
use rsm_core::alignment::{total_alignment_ind, AlignmentParams};
use rsm_core::model::{sample_null, sample_planted, Disorder};
use rsm_core::montecarlo::{mutual_info_curve, polymer_comparison_curve, subsequence_length, CurveSpec};
use rsm_core::partition::{count_embeddings_exact, log_count_embeddings, Environment};
use rsm_core::{BitString, Seed};

use crate::args::{parse_grid, AlignmentArgs, CurveArgs};
use crate::output::{Cell, Report, Unit};
use crate::svg::{Chart, Series};
use crate::{CliError, Result};

type Sampler = fn(usize, usize, Seed) -> rsm_core::Result<Disorder>;

const FIGURE1_GRID: &str = "0:0.95:0.05";
const FIGURE2_GRID: &str = "0.05:0.5:0.05";

fn parse_bits(name: &str, text: &str) -> Result<BitString> {
    text.parse().map_err(|_| CliError::Usage(format!("{name} must consist of 0 and 1 only, got {text:?}")))
}

/// Exact count and its logarithm; the logarithm is `-inf` when no embedding exists.
pub fn count(x: &str, y: &str, unit: Unit) -> Result<Report> {
    let (x, y) = (parse_bits("x", x)?, parse_bits("y", y)?);
    if y.len() > x.len() {
        return Err(CliError::Usage(format!("y has length {} but x only {}", y.len(), x.len())));
    }
    let exact = count_embeddings_exact(&x, &y)?;
    let log_count = log_count_embeddings(&Environment::rank_one(&x, &y)?)?.ln_or(f64::NEG_INFINITY);
    let mut report = Report::new("count", vec!["n", "m", "count", "log_count"])
        .config("x", x.to_string())
        .config("y", y.to_string())
        .config("unit", unit.name());
    report.push(vec![x.len().into(), y.len().into(), Cell::Integer(exact.to_string()), unit.convert(log_count).into()]);
    Ok(report)
}

fn curve_spec(args: &CurveArgs, default_grid: &str, seed: u64) -> Result<CurveSpec> {
    let grid = parse_grid(args.grid.as_deref().unwrap_or(default_grid))?;
    Ok(CurveSpec::new(grid, args.length, args.samples, seed)?)
}

fn curve_config(report: Report, spec: &CurveSpec, unit: Unit) -> Report {
    report
        .config("grid", spec.grid().to_vec())
        .config("n", spec.n())
        .config("samples", spec.samples())
        .config("seed", spec.seed())
        .config("unit", unit.name())
}

/// Capacity bounds and the planted Monte Carlo estimate, one row per deletion probability.
pub fn figure1(args: &CurveArgs, seed: u64, unit: Unit) -> Result<(Report, Chart)> {
    let spec = curve_spec(args, FIGURE1_GRID, seed)?;
    let rows = mutual_info_curve(&spec)?;
    let columns = vec!["p", "dgv_lower", "mc_capacity", "mc_stderr", "upper_annealed"];
    let mut report = curve_config(Report::new("figure1", columns), &spec, unit);
    for r in &rows {
        report.push(vec![
            r.p.into(),
            unit.convert(r.lower_dgv).into(),
            unit.convert(r.mc_capacity).into(),
            unit.convert(r.mc_stderr).into(),
            unit.convert(r.upper_annealed).into(),
        ]);
    }
    let along = |f: fn(&rsm_core::montecarlo::CapacityRow) -> f64| {
        rows.iter().map(|r| (r.p, unit.convert(f(r)))).collect::<Vec<_>>()
    };
    let chart = Chart {
        title: format!("Uniform-codebook capacity, N = {}", spec.n()),
        x_label: "deletion probability p".into(),
        y_label: format!("capacity ({})", unit.name()),
        series: vec![
            Series::new("lower bound (GV)", "green", along(|r| r.lower_dgv)),
            Series::new("annealed upper bound", "blue", along(|r| r.upper_annealed)),
            Series::new("Monte Carlo (3 s.e.)", "darkorange", along(|r| r.mc_capacity))
                .with_band(rows.iter().map(|r| 3.0 * unit.convert(r.mc_stderr)).collect()),
        ],
    };
    Ok((report, chart))
}

/// Strict-weak polymer against the null quenched estimate, one row per density.
pub fn figure2(args: &CurveArgs, seed: u64, unit: Unit) -> Result<(Report, Chart)> {
    let spec = curve_spec(args, FIGURE2_GRID, seed)?;
    let rows = polymer_comparison_curve(&spec)?;
    let columns = vec!["alpha", "strict_weak_exact", "null_mc", "null_mc_stderr", "null_zero_fraction"];
    let mut report = curve_config(Report::new("figure2", columns), &spec, unit);
    for r in &rows {
        report.push(vec![
            r.alpha.into(),
            unit.convert(r.strict_weak_exact).into(),
            unit.convert(r.null_mc).into(),
            unit.convert(r.null_mc_stderr).into(),
            r.null_zero_fraction.into(),
        ]);
    }
    let chart = Chart {
        title: format!("Strict-weak polymer and null model, N = {}", spec.n()),
        x_label: "density alpha".into(),
        y_label: format!("free energy ({})", unit.name()),
        series: vec![
            Series::new(
                "strict-weak (shape 1, scale 1/2)",
                "black",
                rows.iter().map(|r| (r.alpha, unit.convert(r.strict_weak_exact))).collect(),
            ),
            Series::new(
                "null Monte Carlo (3 s.e.)",
                "darkorange",
                rows.iter().map(|r| (r.alpha, unit.convert(r.null_mc))).collect(),
            )
            .with_band(rows.iter().map(|r| 3.0 * unit.convert(r.null_mc_stderr)).collect()),
        ],
    };
    Ok((report, chart))
}

/// Induced total alignment of independent pairs drawn under each law.
pub fn alignment_experiment(args: &AlignmentArgs, seed: u64) -> Result<Report> {
    if args.trials == 0 {
        return Err(CliError::Usage("trials must be positive".into()));
    }
    let params = match args.epsilon {
        Some(eps) => AlignmentParams::with_epsilon(args.alpha, args.block, args.length, eps)?,
        None => AlignmentParams::new(args.alpha, args.block, args.length)?,
    };
    let m = subsequence_length(params.alpha, params.n);
    let threshold = params.good_threshold();
    let columns =
        vec!["law", "trials", "good", "good_fraction", "mean_alignment", "min_alignment", "max_alignment", "threshold"];
    let mut report = Report::new("alignment-experiment", columns)
        .config("alpha", params.alpha)
        .config("b", params.b)
        .config("n", params.n)
        .config("m", m)
        .config("epsilon", params.epsilon)
        .config("trials", args.trials)
        .config("seed", seed)
        .config("induced_budget", params.induced_budget())
        .config("delta", params.delta);
    let laws: [(&str, Sampler); 2] = [("planted", sample_planted), ("null", sample_null)];
    for (stream, (name, sample)) in laws.into_iter().enumerate() {
        let base = Seed::new(seed, stream as u64);
        let scores: Vec<Option<f64>> = (0..args.trials)
            .into_par_iter()
            .map(|i| {
                let d = sample(params.n, m, base.child(i as u64))?;
                total_alignment_ind(d.x(), d.y(), &params)
            })
            .collect::<rsm_core::Result<_>>()?;
        let reached: Vec<f64> = scores.iter().flatten().copied().collect();
        let good = reached.iter().filter(|&&t| t >= threshold).count();
        let stat = |v: Option<f64>| v.map_or(Cell::Float(f64::NAN), Cell::Float);
        let mean = (!reached.is_empty()).then(|| reached.iter().sum::<f64>() / reached.len() as f64);
        report.push(vec![
            name.into(),
            args.trials.into(),
            good.into(),
            (good as f64 / args.trials as f64).into(),
            stat(mean),
            stat(reached.iter().copied().reduce(f64::min)),
            stat(reached.iter().copied().reduce(f64::max)),
            threshold.into(),
        ]);
    }
    Ok(report)
}
