//! Monte Carlo estimates of quenched free energies `(1/N) E[ln Z]`.
//!
//! Sample `i` of a run keyed by `seed` draws from `seed.child(i)`, so results do
//! not depend on how samples are scheduled across threads. Samples with
//! `Z = 0` contribute `ln Z := 0` and are counted in `zero_fraction`.

use rayon::prelude::*;
use statrs::function::factorial::ln_binomial;

use crate::annealed::{null_annealed, strict_weak_value};
use crate::capacity::{dgv_lower_bound, upper_bound_uniform_capacity};
use crate::error::{Error, Result};
use crate::model::{sample_channel, sample_null, sample_planted, Seed};
use crate::partition::{log_count_embeddings, Environment};

const LN2: f64 = std::f64::consts::LN_2;

/// Largest ambient length accepted by [`nishimori_exhaustive`].
pub const NISHIMORI_MAX_N: usize = 12;

/// Law of the pair `(x, y)` for rank-one estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisorderLaw {
    Null,
    Planted,
    /// `y` is the deletion-channel output of `x` with deletion probability `1 - α`.
    Channel,
}

/// i.i.d. weight environments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolymerKind {
    /// Uniform `{0, 1}` weights.
    BernoulliMatching,
    /// Gamma weights with the given shape and scale.
    StrictWeak { shape: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Disorder(DisorderLaw),
    Polymer(PolymerKind),
}

/// Sample mean of `(1/N) ln Z` with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyEstimate {
    pub alpha: f64,
    pub n: usize,
    pub model: Model,
    pub samples: usize,
    pub mean: f64,
    /// Sample standard deviation over `√samples`; zero for a single sample.
    pub stderr: f64,
    pub zero_fraction: f64,
}

/// Sum with `O(log n)` error growth.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 16 {
        return values.iter().sum();
    }
    let (left, right) = values.split_at(values.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

/// `⌊α n⌋`, robust to representation error in `α`.
pub fn subsequence_length(alpha: f64, n: usize) -> usize {
    (alpha * n as f64 + 1e-9).floor() as usize
}

fn check_run(alpha: f64, n: usize, samples: usize) -> Result<usize> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::OutOfDomain { name: "alpha", value: alpha, domain: "(0, 1]" });
    }
    if n == 0 {
        return Err(Error::InvalidSampleSize("ambient length must be positive".into()));
    }
    if samples == 0 {
        return Err(Error::InvalidSampleSize("at least one sample is required".into()));
    }
    Ok(subsequence_length(alpha, n))
}

fn aggregate(alpha: f64, n: usize, model: Model, draws: &[Option<f64>]) -> FreeEnergyEstimate {
    let samples = draws.len();
    let values: Vec<f64> = draws.iter().map(|d| d.unwrap_or(0.0) / n as f64).collect();
    let mean = pairwise_sum(&values) / samples as f64;
    let stderr = if samples > 1 {
        let squares: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        (pairwise_sum(&squares) / (samples - 1) as f64 / samples as f64).sqrt()
    } else {
        0.0
    };
    let zeros = draws.iter().filter(|d| d.is_none()).count();
    FreeEnergyEstimate { alpha, n, model, samples, mean, stderr, zero_fraction: zeros as f64 / samples as f64 }
}

/// `ln Z` for one draw of the law, `None` when `Z = 0`.
fn sample_log_count(law: DisorderLaw, alpha: f64, n: usize, m: usize, seed: Seed) -> Result<Option<f64>> {
    let disorder = match law {
        DisorderLaw::Null => sample_null(n, m, seed)?,
        DisorderLaw::Planted => sample_planted(n, m, seed)?,
        DisorderLaw::Channel => sample_channel(n, 1.0 - alpha, seed)?,
    };
    let env = Environment::rank_one(disorder.x(), disorder.y())?;
    Ok(log_count_embeddings(&env)?.ln())
}

/// Quenched estimate for rank-one environments with `M = ⌊αN⌋`.
///
/// Under [`DisorderLaw::Channel`] the length of `y` is random with mean `αN`.
pub fn estimate_quenched(
    law: DisorderLaw,
    alpha: f64,
    n: usize,
    samples: usize,
    seed: Seed,
) -> Result<FreeEnergyEstimate> {
    let m = check_run(alpha, n, samples)?;
    let draws = (0..samples as u64)
        .into_par_iter()
        .map(|i| sample_log_count(law, alpha, n, m, seed.child(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(alpha, n, Model::Disorder(law), &draws))
}

/// Quenched estimate for an i.i.d. environment of size `N x ⌊αN⌋`.
pub fn estimate_polymer(
    kind: PolymerKind,
    alpha: f64,
    n: usize,
    samples: usize,
    seed: Seed,
) -> Result<FreeEnergyEstimate> {
    let m = check_run(alpha, n, samples)?;
    let env_for = |s: Seed| match kind {
        PolymerKind::BernoulliMatching => Environment::bernoulli_half(n, m, s),
        PolymerKind::StrictWeak { shape, scale } => Environment::gamma(n, m, shape, scale, s),
    };
    env_for(seed)?;
    let draws = (0..samples as u64)
        .into_par_iter()
        .map(|i| Ok(log_count_embeddings(&env_for(seed.child(i))?)?.ln()))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(alpha, n, Model::Polymer(kind), &draws))
}

/// Grid, size and seed for a curve of estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    grid: Vec<f64>,
    n: usize,
    samples: usize,
    seed: u64,
}

impl CurveSpec {
    /// Grid values must lie in `[0, 1)` and be strictly increasing.
    pub fn new(grid: Vec<f64>, n: usize, samples: usize, seed: u64) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidGrid("grid is empty".into()));
        }
        if let Some(v) = grid.iter().find(|v| !(**v >= 0.0 && **v < 1.0)) {
            return Err(Error::InvalidGrid(format!("value {v} lies outside [0, 1)")));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("values must be strictly increasing".into()));
        }
        if n == 0 || samples == 0 {
            return Err(Error::InvalidSampleSize("length and sample count must be positive".into()));
        }
        Ok(Self { grid, n, samples, seed })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn point_seed(&self, index: usize) -> Seed {
        Seed::new(self.seed, index as u64)
    }
}

/// One deletion probability of the capacity curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityRow {
    pub p: f64,
    pub lower_dgv: f64,
    /// `(M ln 2 - ln C(N, M) + E[ln Z_planted]) / N` with `M = ⌊(1 - p) N⌋`: the
    /// mutual information per input bit at length `N`, which tends to
    /// `α ln 2 - h(α) + f_pl(α)`.
    pub mc_capacity: f64,
    pub mc_stderr: f64,
    pub upper_annealed: f64,
}

/// Capacity bounds and the planted Monte Carlo estimate over a grid of deletion probabilities.
pub fn mutual_info_curve(spec: &CurveSpec) -> Result<Vec<CapacityRow>> {
    spec.grid
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let alpha = 1.0 - p;
            let est = estimate_quenched(DisorderLaw::Planted, alpha, spec.n, spec.samples, spec.point_seed(k))?;
            let (n, m) = (spec.n, subsequence_length(alpha, spec.n));
            let density = m as f64 / n as f64;
            Ok(CapacityRow {
                p,
                lower_dgv: dgv_lower_bound(p)?,
                mc_capacity: density * LN2 - ln_binomial(n as u64, m as u64) / n as f64 + est.mean,
                mc_stderr: est.stderr,
                upper_annealed: upper_bound_uniform_capacity(p)?,
            })
        })
        .collect()
}

/// One density of the polymer comparison curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolymerRow {
    pub alpha: f64,
    pub strict_weak_exact: f64,
    pub null_mc: f64,
    pub null_mc_stderr: f64,
    /// Fraction of null samples with no embedding.
    pub null_zero_fraction: f64,
}

/// Strict-Weak free energy with shape 1 and scale 1/2 against the null
/// quenched estimate, over a grid of densities in `(0, 1/2]`.
pub fn polymer_comparison_curve(spec: &CurveSpec) -> Result<Vec<PolymerRow>> {
    spec.grid
        .iter()
        .enumerate()
        .map(|(k, &alpha)| {
            if !(alpha > 0.0 && alpha <= 0.5) {
                return Err(Error::InvalidGrid(format!("density {alpha} lies outside (0, 1/2]")));
            }
            let est = estimate_quenched(DisorderLaw::Null, alpha, spec.n, spec.samples, spec.point_seed(k))?;
            Ok(PolymerRow {
                alpha,
                strict_weak_exact: strict_weak_value(1.0, 0.5, alpha)?.value,
                null_mc: est.mean,
                null_mc_stderr: est.stderr,
                null_zero_fraction: est.zero_fraction,
            })
        })
        .collect()
}

/// Both sides of `E[ln Z_pl] = (2^M / C(N, M)) E[Z_null ln Z_null]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NishimoriReport {
    pub n: usize,
    pub m: usize,
    pub planted_side: f64,
    pub null_side: f64,
}

/// Embedding count for strings packed into the low bits of `u32` masks.
fn small_count(x: u32, n: usize, y: u32, m: usize) -> u64 {
    let mut row = [0u64; NISHIMORI_MAX_N + 1];
    row[0] = 1;
    for i in 0..n {
        let xi = (x >> i) & 1;
        for j in (1..=m.min(i + 1)).rev() {
            if (y >> (j - 1)) & 1 == xi {
                row[j] += row[j - 1];
            }
        }
    }
    row[m]
}

/// Multiplicities of each count value; index `k` holds the weight of `Z = k`.
fn add_to_histogram(hist: &mut Vec<u64>, z: u64, weight: u64) {
    let z = z as usize;
    if hist.len() <= z {
        hist.resize(z + 1, 0);
    }
    hist[z] += weight;
}

fn merge(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    a.iter_mut().zip(&b).for_each(|(s, v)| *s += v);
    a
}

/// `Σ_k hist[k] f(k)` over `k >= 1`.
fn histogram_sum(hist: &[u64], f: impl Fn(f64) -> f64) -> f64 {
    let terms: Vec<f64> = hist.iter().enumerate().skip(1).map(|(k, &c)| c as f64 * f(k as f64)).collect();
    pairwise_sum(&terms)
}

/// Evaluates both sides by enumerating every `(x, σ*)` and every `(x, y)`.
///
/// Counts are tallied into integer histograms, so each side is a sum over
/// distinct values of `Z` with exact multiplicities.
pub fn nishimori_exhaustive(n: usize, m: usize) -> Result<NishimoriReport> {
    if n > NISHIMORI_MAX_N {
        return Err(Error::OutOfOracleRange { n, m, max: NISHIMORI_MAX_N });
    }
    if m > n {
        return Err(Error::InvalidDimensions { n, m });
    }
    let subsets: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == m).collect();
    let (planted, null) = (0u32..1 << n)
        .into_par_iter()
        .map(|x| {
            let mut planted = Vec::new();
            for &s in &subsets {
                let y = (0..n)
                    .filter(|i| (s >> i) & 1 == 1)
                    .enumerate()
                    .fold(0u32, |acc, (j, i)| acc | (((x >> i) & 1) << j));
                add_to_histogram(&mut planted, small_count(x, n, y, m), 1);
            }
            let mut null = Vec::new();
            for y in 0u32..1 << m {
                add_to_histogram(&mut null, small_count(x, n, y, m), 1);
            }
            (planted, null)
        })
        .reduce(|| (Vec::new(), Vec::new()), |a, b| (merge(a.0, b.0), merge(a.1, b.1)));
    let strings = (1u64 << n) as f64;
    let choose = subsets.len() as f64;
    let planted_side = histogram_sum(&planted, f64::ln) / (strings * choose);
    let null_expectation = histogram_sum(&null, |z| z * z.ln()) / (strings * (1u64 << m) as f64);
    let null_side = (1u64 << m) as f64 / choose * null_expectation;
    Ok(NishimoriReport { n, m, planted_side, null_side })
}

/// Sampled comparison of the planted quenched free energy with the null law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub planted: FreeEnergyEstimate,
    pub null_annealed: f64,
    /// `(1/N) (2^M / C(N, M)) Ê[Z_null ln Z_null]` from null samples; dominated by rare draws at large `N`.
    pub reweighted_null: f64,
}

pub fn null_planted_gap_experiment(alpha: f64, n: usize, samples: usize, seed: Seed) -> Result<GapReport> {
    let m = check_run(alpha, n, samples)?;
    let planted = estimate_quenched(DisorderLaw::Planted, alpha, n, samples, seed.child(0))?;
    let null_seed = seed.child(1);
    let logs = (0..samples as u64)
        .into_par_iter()
        .map(|i| sample_log_count(DisorderLaw::Null, alpha, n, m, null_seed.child(i)))
        .collect::<Result<Vec<_>>>()?;
    // ln(Z ln Z) for the samples with Z > 1.
    let log_terms: Vec<f64> = logs.iter().flatten().filter(|l| **l > 0.0).map(|l| l + l.ln()).collect();
    let reweighted_null = match log_terms.iter().copied().reduce(f64::max) {
        None => 0.0,
        Some(hi) => {
            let shifted: Vec<f64> = log_terms.iter().map(|t| (t - hi).exp()).collect();
            let log_mean = hi + (pairwise_sum(&shifted) / samples as f64).ln();
            (log_mean + m as f64 * LN2 - ln_binomial(n as u64, m as u64)).exp() / n as f64
        }
    };
    Ok(GapReport { planted, null_annealed: null_annealed(alpha)?, reweighted_null })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_count_by_hand() {
        // x = 0110 (bits low to high), y = 10: the single 1 of x at index 1 or 2, then 0 at index 3.
        let x = 0b0110;
        let y = 0b01;
        assert_eq!(small_count(x, 4, y, 2), 2);
        assert_eq!(small_count(x, 4, 0, 0), 1);
    }

    #[test]
    fn subsequence_length_rounds_robustly() {
        assert_eq!(subsequence_length(0.29, 100), 29);
        assert_eq!(subsequence_length(0.7, 10), 7);
        assert_eq!(subsequence_length(1.0, 13), 13);
    }
}
