//! Oracle checks over every module, reported one line per check.
//!
//! The oracles here are brute-force enumerations and independent quadratures,
//! written without reference to the library internals. Every reference value
//! is offset by `shift`, so a nonzero shift must turn checks red.

use rand::Rng;
use rsm_core::alignment::{local_alignment, total_alignment_ind, total_alignment_std, AlignmentParams};
use rsm_core::annealed::{
    barz_exact, null_annealed, objective_of_rho, pair_mgf_closed_form, pair_mgf_series, planted_annealed,
    strict_weak_value, x_of_rho, y_of_rho, z_of_rho,
};
use rsm_core::capacity::{
    beta_alpha, dgv_lower_bound, log_explicit_lower_bound, skip_vector_lower_bound, upper_bound_uniform_capacity,
};
use rsm_core::montecarlo::{
    estimate_polymer, estimate_quenched, mutual_info_curve, nishimori_exhaustive, CurveSpec, DisorderLaw, PolymerKind,
};
use rsm_core::partition::{count_embeddings_exact, greedy_embed, log_count_embeddings, Environment};
use rsm_core::{BitString, Seed};

use crate::args::Level;
use crate::output::Report;

const LN2: f64 = std::f64::consts::LN_2;
const LN10: f64 = std::f64::consts::LN_10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub op: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(module: &'static str, op: &'static str, run: impl FnOnce() -> rsm_core::Result<(bool, String)>) -> Check {
    let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    Check { module, op, pass, detail }
}

fn to_bits(v: &[bool]) -> BitString {
    v.iter().copied().collect()
}

fn random_bits(rng: &mut impl Rng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.random_bool(0.5)).collect()
}

/// Embeddings counted by branching on every ambient position.
fn brute_count(x: &[bool], y: &[bool]) -> u64 {
    match (x.split_first(), y.split_first()) {
        (_, None) => 1,
        (None, Some(_)) => 0,
        (Some((xh, xt)), Some((yh, yt))) => brute_count(xt, y) + if xh == yh { brute_count(xt, yt) } else { 0 },
    }
}

fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

fn brute_barz(n: usize, m: usize) -> f64 {
    let all = subsets(n, m);
    all.iter()
        .flat_map(|s| all.iter().map(move |t| s.iter().zip(t).filter(|(a, b)| a == b).count()))
        .map(|agree| 2f64.powi(agree as i32))
        .sum()
}

fn simpson_normal_cdf(z: f64) -> f64 {
    let steps = 20_000;
    let h = z / steps as f64;
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let inner: f64 = (1..steps).map(|k| if k % 2 == 1 { 4.0 } else { 2.0 } * pdf(k as f64 * h)).sum();
    0.5 + (pdf(0.0) + pdf(z) + inner) * h / 3.0
}

/// Best average local alignment over every length vector accepted by `admissible`.
fn brute_alignment(
    x: &BitString,
    y: &BitString,
    p: &AlignmentParams,
    admissible: impl Fn(&[usize]) -> bool,
) -> Option<f64> {
    fn vectors(blocks: usize, b: usize, total: usize) -> Vec<Vec<usize>> {
        if blocks == 0 {
            return if total == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        (0..=b.min(total))
            .flat_map(|len| {
                vectors(blocks - 1, b, total - len).into_iter().map(move |mut rest| {
                    rest.insert(0, len);
                    rest
                })
            })
            .collect()
    }
    vectors(p.big_b, p.b, y.len())
        .into_iter()
        .filter(|lens| admissible(lens))
        .map(|lens| {
            let mut start = 0;
            let total: f64 = lens
                .iter()
                .enumerate()
                .map(|(i, &len)| {
                    let score =
                        local_alignment(&x.slice(i * p.b, (i + 1) * p.b), &y.slice(start, start + len), p.delta);
                    start += len;
                    score
                })
                .sum();
            total / p.big_b as f64
        })
        .reduce(f64::max)
}

fn fast_checks(shift: f64, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();

    checks.push(check("partition", "count_embeddings_exact", || {
        let mut rng = Seed::new(seed, 1).rng();
        let mut wrong = 0;
        for _ in 0..300 {
            let n = rng.random_range(0..=10);
            let m = rng.random_range(0..=n);
            let (x, y) = (random_bits(&mut rng, n), random_bits(&mut rng, m));
            let got: f64 = count_embeddings_exact(&to_bits(&x), &to_bits(&y))?.to_string().parse().unwrap_or(f64::NAN);
            if got != brute_count(&x, &y) as f64 + shift {
                wrong += 1;
            }
        }
        Ok((wrong == 0, format!("300 pairs with N <= 10 against enumeration, {wrong} mismatches")))
    }));

    checks.push(check("partition", "log_count_embeddings", || {
        let mut rng = Seed::new(seed, 2).rng();
        let mut worst = 0f64;
        for _ in 0..100 {
            let n = rng.random_range(1..=40);
            let m = rng.random_range(0..=n / 2);
            let (x, y) = (to_bits(&random_bits(&mut rng, n)), to_bits(&random_bits(&mut rng, m)));
            let exact: f64 = count_embeddings_exact(&x, &y)?.to_string().parse().unwrap_or(f64::NAN);
            if exact == 0.0 {
                continue;
            }
            let log = log_count_embeddings(&Environment::rank_one(&x, &y)?)?.ln_or(f64::NEG_INFINITY);
            worst = worst.max((log - (exact.ln() + shift)).abs());
        }
        Ok((worst < 1e-10, format!("100 pairs with N <= 40, max |log error| {worst:.1e}")))
    }));

    checks.push(check("partition", "greedy_embed", || {
        let mut rng = Seed::new(seed, 3).rng();
        let mut exceptions = 0;
        for _ in 0..2000 {
            let m = rng.random_range(0..=20);
            let (x, y) = (random_bits(&mut rng, 20), random_bits(&mut rng, m));
            let absent = greedy_embed(&to_bits(&x), &to_bits(&y)).is_none();
            if absent != (brute_count(&x, &y) as f64 + shift == 0.0) {
                exceptions += 1;
            }
        }
        Ok((exceptions == 0, format!("2000 pairs at N = 20, {exceptions} exceptions")))
    }));

    checks.push(check("annealed", "barz_exact", || {
        let mut wrong = 0;
        for n in 1..=7 {
            for m in 1..=n {
                let got: f64 = barz_exact(n, m)?.to_string().parse().unwrap_or(f64::NAN);
                if got != brute_barz(n, m) + shift {
                    wrong += 1;
                }
            }
        }
        Ok((wrong == 0, format!("all (N, M) with N <= 7 against the direct double sum, {wrong} mismatches")))
    }));

    for k in 1..=19 {
        let alpha = k as f64 * 0.05;
        checks.push(check("annealed", "planted_annealed", || {
            let s = planted_annealed(alpha)?;
            let c = 1.0 / alpha;
            let z = pair_mgf_closed_form(s.x, s.y)? - (1.0 + shift);
            let constraint = s.x * s.x * (1.0 - 2.0 * s.y) - 2.0 * s.x * (1.0 + s.y) + 1.0 + shift;
            let quadratic = c * s.x * s.x + 3.0 * s.x - (c - 1.0) + shift;
            let dx = x_of_rho(alpha, s.rho_star)? - s.x + shift;
            let dy = y_of_rho(alpha, s.rho_star)? - s.y + shift;
            let worst = [z, constraint, quadratic, dx, dy].iter().fold(0f64, |w, r| w.max(r.abs()));
            Ok((
                worst < 1e-10,
                format!(
                    "alpha={alpha:.2} Z-1={z:.1e} constraint={constraint:.1e} quadratic={quadratic:.1e} \
                     x(rho*)-x={dx:.1e} y(rho*)-y={dy:.1e}"
                ),
            ))
        }));
    }

    checks.push(check("annealed", "planted_annealed", || {
        let s = planted_annealed(0.5)?;
        let ok = (s.x - (0.280_776_4 + shift)).abs() < 1e-7
            && (s.y - (0.719_223_6 + shift)).abs() < 1e-7
            && (s.raw - (1.434_988 + shift)).abs() < 1e-6
            && (s.value - (0.395_267 + shift)).abs() < 1e-6;
        Ok((ok, format!("alpha=0.5 x={:.7} y={:.7} R={:.6} value={:.6}", s.x, s.y, s.raw, s.value)))
    }));

    checks.push(check("annealed", "pair_mgf_series", || {
        let mut worst = 0f64;
        for y in [0.1f64, 0.5, 1.0, 2.0, 4.0] {
            let edge = 1.0 / (1.0 + y.sqrt()).powi(2);
            for f in [0.1, 0.4, 0.7, 0.9] {
                let closed = pair_mgf_closed_form(f * edge, y)?;
                let series = pair_mgf_series(f * edge, y, 1e-15 * closed)?;
                worst = worst.max(((closed + shift - series) / closed).abs());
            }
        }
        Ok((worst < 1e-9, format!("20 points inside the convergence region, max rel err {worst:.1e}")))
    }));

    checks.push(check("annealed", "objective_of_rho", || {
        let (alpha, h) = (0.5, 1e-6);
        let mut worst = 0f64;
        for k in 1..=20 {
            let rho = k as f64 / 21.0;
            let fd = (objective_of_rho(alpha, rho + h)? - objective_of_rho(alpha, rho - h)?) / (2.0 * h);
            worst = worst.max((fd - (alpha * z_of_rho(alpha, rho)?.ln() + shift)).abs());
        }
        Ok((worst < 1e-5, format!("envelope identity at 20 interior rho, max err {worst:.1e}")))
    }));

    checks.push(check("annealed", "strict_weak_value", || {
        let v = strict_weak_value(1.0, 0.5, 0.3)?.value;
        let err = (v - (0.401_350_728_940 + shift)).abs();
        Ok((err < 1e-9, format!("shape 1, scale 1/2, alpha 0.3: {v:.12} (err {err:.1e})")))
    }));

    checks.push(check("annealed", "null_annealed", || {
        let v = null_annealed(0.25)?;
        let lower = skip_vector_lower_bound(0.25)?;
        let ok = (v - (0.389_05 + shift)).abs() < 5e-6 && (lower - (LN2 / 2.0 + shift)).abs() < 1e-15;
        Ok((ok, format!("alpha 0.25: annealed {v:.6}, skip-vector lower bound {lower:.6}")))
    }));

    checks.push(check("montecarlo", "nishimori_exhaustive", || {
        let mut worst = 0f64;
        for (n, m) in [(4, 2), (6, 3), (8, 3)] {
            let r = nishimori_exhaustive(n, m)?;
            worst = worst.max((r.planted_side - r.null_side - shift).abs());
        }
        Ok((worst < 1e-12, format!("(4,2), (6,3), (8,3): max |difference| {worst:.1e}")))
    }));

    checks.push(check("alignment", "total_alignment_std/ind", || {
        let mut rng = Seed::new(seed, 4).rng();
        let (mut cases, mut wrong) = (0, 0);
        for big_b in 1..=3usize {
            for b in 1..=4usize {
                for alpha in [0.3, 0.5, 0.8] {
                    let p = AlignmentParams::with_epsilon(alpha, b, big_b * b, 0.2)?;
                    let x = to_bits(&random_bits(&mut rng, big_b * b));
                    let m = rng.random_range(0..=big_b * b);
                    let y = to_bits(&random_bits(&mut rng, m));
                    let std_ok = |lens: &[usize]| {
                        lens.iter().enumerate().filter(|&(i, &l)| l != p.standard_length(i)).count()
                            <= p.standardized_budget()
                    };
                    let ind_ok =
                        |lens: &[usize]| lens.iter().filter(|&&l| !p.in_window(l)).count() <= p.induced_budget();
                    let pairs = [
                        (total_alignment_std(&x, &y, &p)?, brute_alignment(&x, &y, &p, std_ok)),
                        (total_alignment_ind(&x, &y, &p)?, brute_alignment(&x, &y, &p, ind_ok)),
                    ];
                    for (dp, brute) in pairs {
                        let agree = match (dp, brute) {
                            (Some(d), Some(o)) => (d - (o + shift)).abs() < 1e-12,
                            (d, o) => d.is_none() && o.is_none() && shift == 0.0,
                        };
                        wrong += usize::from(!agree);
                        cases += 1;
                    }
                }
            }
        }
        Ok((wrong == 0, format!("{cases} DP values against partition enumeration, {wrong} mismatches")))
    }));

    checks.push(check("capacity", "beta_alpha", || {
        let beta = beta_alpha(0.5)?;
        let oracle = simpson_normal_cdf(1.0) - 0.5 + shift;
        Ok(((beta - oracle).abs() < 1e-9, format!("beta(0.5) = {beta:.9}, quadrature {oracle:.9}")))
    }));

    checks.push(check("capacity", "log_explicit_lower_bound", || {
        let log10 = log_explicit_lower_bound(0.5)? / LN10;
        Ok(((log10 - (-1860.0 + shift)).abs() <= 1.0, format!("log10 of the bound at p = 0.5: {log10:.3}")))
    }));

    checks.push(check("capacity", "upper_bound_uniform_capacity", || {
        let (up, low) = (upper_bound_uniform_capacity(0.0)?, dgv_lower_bound(0.0)?);
        let reference = LN2 + shift;
        Ok((up == reference && low == reference, format!("p = 0: upper {up}, lower {low}")))
    }));

    checks
}

fn full_checks(shift: f64, seed: u64) -> Vec<Check> {
    let mut checks = Vec::new();
    for (k, alpha) in [0.2, 0.4].into_iter().enumerate() {
        checks.push(check("montecarlo", "estimate_polymer", || {
            let kind = PolymerKind::StrictWeak { shape: 1.0, scale: 0.5 };
            let est = estimate_polymer(kind, alpha, 4000, 16, Seed::new(seed, 10 + k as u64))?;
            let exact = strict_weak_value(1.0, 0.5, alpha)?.value + shift;
            let rel = ((est.mean - exact) / exact).abs();
            Ok((rel < 0.05, format!("strict-weak alpha={alpha}: MC {:.5} vs exact {exact:.5}, rel {rel:.4}", est.mean)))
        }));
    }

    checks.push(check("montecarlo", "estimate_quenched", || {
        let est = estimate_quenched(DisorderLaw::Null, 0.25, 4000, 8, Seed::new(seed, 20))?;
        let lower = skip_vector_lower_bound(0.25)? + shift - 3.0 * est.stderr;
        let upper = null_annealed(0.25)? + shift;
        let ok = lower <= est.mean && est.mean <= upper;
        Ok((ok, format!("null alpha=0.25, N=4000: {:.5} +- {:.5} in [{lower:.5}, {upper:.5}]", est.mean, est.stderr)))
    }));

    checks.push(check("montecarlo", "estimate_quenched", || {
        let est = estimate_quenched(DisorderLaw::Planted, 0.5, 4000, 8, Seed::new(seed, 21))?;
        let lower = null_annealed(0.5)? + shift;
        let upper = planted_annealed(0.5)?.value + shift;
        let band = 3.0 * est.stderr;
        let ok = lower <= est.mean + band && est.mean - band <= upper;
        Ok((
            ok,
            format!(
                "planted alpha=0.5, N=4000: {:.5} +- {:.5}, annealed range [{lower:.5}, {upper:.5}]",
                est.mean, est.stderr
            ),
        ))
    }));

    checks.push(check("montecarlo", "mutual_info_curve", || {
        let rows = mutual_info_curve(&CurveSpec::new(vec![0.0, 0.3, 0.7], 10_000, 8, seed)?)?;
        let ordered = rows.iter().all(|r| {
            let mid = r.mc_capacity + 3.0 * r.mc_stderr;
            r.lower_dgv + shift <= mid && mid <= r.upper_annealed + shift + 6.0 * r.mc_stderr
        });
        let last = rows[2];
        let positive = last.mc_capacity - 3.0 * last.mc_stderr > shift;
        Ok((
            ordered && positive,
            format!(
                "p in {{0, 0.3, 0.7}}, N=10000: ordering {ordered}, capacity at 0.7 = {:.5} +- {:.5}",
                last.mc_capacity, last.mc_stderr
            ),
        ))
    }));
    checks
}

/// Runs the checks of the given level.
pub fn run_checks(level: Level, shift: f64, seed: u64) -> Vec<Check> {
    let mut checks = fast_checks(shift, seed);
    if level == Level::Full {
        checks.extend(full_checks(shift, seed));
    }
    checks
}

pub fn report(checks: &[Check], level: Level, seed: u64) -> Report {
    let level_name = match level {
        Level::Fast => "fast",
        Level::Full => "full",
    };
    let mut report = Report::new("verify", vec!["status", "module", "op", "detail"])
        .config("level", level_name)
        .config("seed", seed);
    for c in checks {
        report.push(vec![
            if c.pass { "PASS" } else { "FAIL" }.into(),
            c.module.into(),
            c.op.into(),
            c.detail.clone().into(),
        ]);
    }
    report
}
