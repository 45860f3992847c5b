//! Partition functions of the embedding lattice.
//!
//! `Z_{n,m}` counts (or weighs) strictly increasing maps of the first `m`
//! symbols of `y` into the first `n` symbols of `x`, and satisfies
//!
//! ```text
//! Z_{n,m} = Z_{n-1,m} + B_{n,m} Z_{n-1,m-1},   Z_{n,0} = 1,   Z_{0,m} = [m = 0].
//! ```
//!
//! For the rank-one environment `B_{n,m} = 1{x_n = y_m}`. All dynamic programs
//! stream over `n` and update a single row of length `M + 1` in place, visiting
//! only the band `M - (N - n) <= m <= n` that can still reach `(N, M)`.

use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, RngCore};
use rand_distr::{Distribution, Gamma};

use crate::bitstring::BitString;
use crate::error::{check_positive, Error, Result};
use crate::model::Seed;

/// A non-negative weight stored as its natural logarithm.
///
/// `LogWeight::ZERO` is a dedicated sentinel for weight zero; every operation
/// tests for it explicitly, so `ln(0)` never enters the arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeight(f64);

impl LogWeight {
    pub const ZERO: LogWeight = LogWeight(f64::NEG_INFINITY);
    pub const ONE: LogWeight = LogWeight(0.0);

    /// Weight with natural logarithm `ln`, which must be finite.
    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(ln.is_finite(), "log-weight must be finite, got {ln}");
        LogWeight(ln)
    }

    pub fn from_weight(w: f64) -> Result<Self> {
        if !(w >= 0.0 && w.is_finite()) {
            return Err(Error::InvalidEnvironment(format!("weight {w} is not a finite non-negative number")));
        }
        Ok(if w == 0.0 { Self::ZERO } else { LogWeight(w.ln()) })
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Natural logarithm, or `None` for weight zero.
    pub fn ln(self) -> Option<f64> {
        (!self.is_zero()).then_some(self.0)
    }

    /// Natural logarithm, with `zero_value` standing in for `ln 0`.
    pub fn ln_or(self, zero_value: f64) -> f64 {
        self.ln().unwrap_or(zero_value)
    }
}

impl Add for LogWeight {
    type Output = LogWeight;

    /// `ln(e^a + e^b)` without overflow.
    #[inline]
    fn add(self, rhs: LogWeight) -> LogWeight {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (hi, lo) = if self.0 >= rhs.0 { (self.0, rhs.0) } else { (rhs.0, self.0) };
        LogWeight(hi + (lo - hi).exp().ln_1p())
    }
}

impl Mul for LogWeight {
    type Output = LogWeight;

    #[inline]
    fn mul(self, rhs: LogWeight) -> LogWeight {
        if self.is_zero() || rhs.is_zero() {
            LogWeight::ZERO
        } else {
            LogWeight(self.0 + rhs.0)
        }
    }
}

/// The weight matrix `B` driving the recurrence.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvironmentKind {
    /// `B_{n,m} = 1{x_n = y_m}`.
    RankOneIndicator { x: BitString, y: BitString },
    /// i.i.d. uniform `{0, 1}` entries.
    IidBernoulliHalf,
    /// i.i.d. Gamma entries with the given shape and scale (mean `shape * scale`).
    IidGamma { shape: f64, scale: f64 },
    /// Row-major `N x M` matrix of non-negative weights.
    Explicit { weights: Vec<f64> },
}

/// A weight environment of dimensions `N x M`.
///
/// Random environments are realised lazily, one row of `M` weights at a time,
/// from the stored seed; the same seed always realises the same matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    kind: EnvironmentKind,
    n: usize,
    m: usize,
    seed: Seed,
}

impl Environment {
    pub fn rank_one(x: &BitString, y: &BitString) -> Result<Self> {
        if y.len() > x.len() {
            return Err(Error::InvalidDimensions { n: x.len(), m: y.len() });
        }
        Ok(Self {
            kind: EnvironmentKind::RankOneIndicator { x: x.clone(), y: y.clone() },
            n: x.len(),
            m: y.len(),
            seed: Seed::new(0, 0),
        })
    }

    pub fn bernoulli_half(n: usize, m: usize, seed: Seed) -> Result<Self> {
        Ok(Self { kind: EnvironmentKind::IidBernoulliHalf, n, m, seed })
    }

    pub fn gamma(n: usize, m: usize, shape: f64, scale: f64, seed: Seed) -> Result<Self> {
        check_positive("gamma shape", shape).map_err(|e| Error::InvalidEnvironment(e.to_string()))?;
        check_positive("gamma scale", scale).map_err(|e| Error::InvalidEnvironment(e.to_string()))?;
        Ok(Self { kind: EnvironmentKind::IidGamma { shape, scale }, n, m, seed })
    }

    pub fn explicit(n: usize, m: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != n * m {
            return Err(Error::InvalidEnvironment(format!(
                "expected {} weights for a {n} x {m} environment, got {}",
                n * m,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidEnvironment(format!("weight {w} is not a finite non-negative number")));
        }
        Ok(Self { kind: EnvironmentKind::Explicit { weights }, n, m, seed: Seed::new(0, 0) })
    }

    pub fn kind(&self) -> &EnvironmentKind {
        &self.kind
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }
}

/// One row of log-partition values `ln Z_{n,0..=M}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogDpTable {
    row: Vec<LogWeight>,
    row_index: usize,
}

impl LogDpTable {
    /// Row `n = 0`: `Z_{0,0} = 1` and `Z_{0,m} = 0` for `m >= 1`.
    pub fn new(m: usize) -> Self {
        let mut row = vec![LogWeight::ZERO; m + 1];
        row[0] = LogWeight::ONE;
        Self { row, row_index: 0 }
    }

    /// Advance to row `n + 1` given the weights `B_{n+1, 1..=M}`.
    pub fn advance(&mut self, weights: &[LogWeight]) {
        assert_eq!(weights.len() + 1, self.row.len(), "weight row has the wrong length");
        let hi = self.row.len() - 1;
        self.advance_band(weights, 1, hi);
    }

    /// Update only `m` in `lo..=hi` (with `lo >= 1`); entries outside the band keep stale values.
    fn advance_band(&mut self, weights: &[LogWeight], lo: usize, hi: usize) {
        for m in (lo..=hi).rev() {
            let carried = weights[m - 1] * self.row[m - 1];
            self.row[m] = self.row[m] + carried;
        }
        self.row_index += 1;
    }

    pub fn row_index(&self) -> usize {
        self.row_index
    }

    pub fn row(&self) -> &[LogWeight] {
        &self.row
    }

    pub fn get(&self, m: usize) -> LogWeight {
        self.row[m]
    }
}

/// Band of `m` values of row `n` (1-based) that can still reach `(big_n, big_m)`.
fn band(n: usize, big_n: usize, big_m: usize) -> (usize, usize) {
    let lo = (big_m + n).saturating_sub(big_n).max(1);
    (lo, n.min(big_m))
}

/// Exact number of embeddings of `y` into `x`.
pub fn count_embeddings_exact(x: &BitString, y: &BitString) -> Result<BigUint> {
    let (big_n, big_m) = (x.len(), y.len());
    if big_m > big_n {
        return Err(Error::InvalidDimensions { n: big_n, m: big_m });
    }
    let (xs, ys) = (x.to_bytes(), y.to_bytes());
    let mut row = vec![BigUint::zero(); big_m + 1];
    row[0] = BigUint::one();
    for n in 1..=big_n {
        let (lo, hi) = band(n, big_n, big_m);
        for m in (lo..=hi).rev() {
            if xs[n - 1] == ys[m - 1] {
                let (head, tail) = row.split_at_mut(m);
                tail[0] += &head[m - 1];
            }
        }
    }
    Ok(row.swap_remove(big_m))
}

/// `ln Z_{N,M}` for the environment, or [`LogWeight::ZERO`] when `Z = 0`.
///
/// Uses `O(M)` memory and `O(N (N - M + 1))` log-additions.
pub fn log_count_embeddings(env: &Environment) -> Result<LogWeight> {
    let (big_n, big_m) = env.dims();
    if big_m > big_n {
        return Ok(LogWeight::ZERO);
    }
    let mut table = LogDpTable::new(big_m);
    let mut weights = vec![LogWeight::ZERO; big_m];
    match env.kind() {
        EnvironmentKind::RankOneIndicator { x, y } => {
            let (xs, ys) = (x.to_bytes(), y.to_bytes());
            for n in 1..=big_n {
                let (lo, hi) = band(n, big_n, big_m);
                let row = &mut table.row;
                for m in (lo..=hi).rev() {
                    if xs[n - 1] == ys[m - 1] {
                        row[m] = row[m] + row[m - 1];
                    }
                }
                table.row_index += 1;
            }
        }
        EnvironmentKind::IidBernoulliHalf => {
            let mut rng = env.seed.rng();
            let mut bits = Vec::with_capacity(big_m.div_ceil(64));
            for n in 1..=big_n {
                bits.clear();
                bits.extend((0..big_m.div_ceil(64)).map(|_| rng.next_u64()));
                let (lo, hi) = band(n, big_n, big_m);
                let row = &mut table.row;
                for m in (lo..=hi).rev() {
                    if (bits[(m - 1) / 64] >> ((m - 1) % 64)) & 1 == 1 {
                        row[m] = row[m] + row[m - 1];
                    }
                }
                table.row_index += 1;
            }
        }
        EnvironmentKind::IidGamma { shape, scale } => {
            let mut rng = env.seed.rng();
            let dist = Gamma::new(*shape, *scale).map_err(|e| Error::InvalidEnvironment(e.to_string()))?;
            for n in 1..=big_n {
                for w in weights.iter_mut() {
                    *w = gamma_log_weight(&dist, &mut rng);
                }
                let (lo, hi) = band(n, big_n, big_m);
                table.advance_band(&weights, lo, hi);
            }
        }
        EnvironmentKind::Explicit { weights: matrix } => {
            for n in 1..=big_n {
                for (w, &b) in weights.iter_mut().zip(&matrix[(n - 1) * big_m..n * big_m]) {
                    *w = LogWeight::from_weight(b)?;
                }
                let (lo, hi) = band(n, big_n, big_m);
                table.advance_band(&weights, lo, hi);
            }
        }
    }
    Ok(table.get(big_m))
}

fn gamma_log_weight(dist: &Gamma<f64>, rng: &mut impl Rng) -> LogWeight {
    let w = dist.sample(rng);
    if w > 0.0 {
        LogWeight(w.ln())
    } else {
        LogWeight::ZERO
    }
}

/// Leftmost embedding: each symbol of `y` goes to the first matching position
/// after the previous one. `None` iff `y` is not a subsequence of `x`.
pub fn greedy_embed(x: &BitString, y: &BitString) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(y.len());
    let mut t = 0;
    for target in y.iter() {
        while t < x.len() && x.get(t) != target {
            t += 1;
        }
        if t == x.len() {
            return None;
        }
        out.push(t);
        t += 1;
    }
    Some(out)
}

/// Per-symbol skip counts relative to the greedy embedding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkipVector(Vec<usize>);

impl SkipVector {
    pub fn new(skips: Vec<usize>) -> Self {
        SkipVector(skips)
    }

    pub fn skips(&self) -> &[usize] {
        &self.0
    }

    /// Total number of skipped instances.
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

fn first_match(x: &BitString, from: usize, bit: bool) -> Option<usize> {
    (from..x.len()).find(|&t| x.get(t) == bit)
}

/// Encode an embedding as skips: entry `i` counts the instances of `y_i` in `x`
/// after the earliest one available to symbol `i`, up to and including `sigma[i]`.
pub fn skip_vector_of(x: &BitString, y: &BitString, sigma: &[usize]) -> Result<SkipVector> {
    if sigma.len() != y.len() {
        return Err(Error::InvalidEmbedding(format!("{} positions for {} symbols", sigma.len(), y.len())));
    }
    let mut skips = Vec::with_capacity(sigma.len());
    let mut from = 0;
    for (i, (&pos, bit)) in sigma.iter().zip(y.iter()).enumerate() {
        if pos < from || pos >= x.len() {
            return Err(Error::InvalidEmbedding(format!("position {pos} at index {i} is out of order or range")));
        }
        if x.get(pos) != bit {
            return Err(Error::InvalidEmbedding(format!("x[{pos}] does not match y[{i}]")));
        }
        let earliest = first_match(x, from, bit).expect("pos itself matches");
        skips.push((earliest + 1..=pos).filter(|&t| x.get(t) == bit).count());
        from = pos + 1;
    }
    Ok(SkipVector(skips))
}

/// Decode a skip vector by walking `x`; `None` if the walk runs off the end.
pub fn embedding_from_skips(x: &BitString, y: &BitString, skips: &SkipVector) -> Option<Vec<usize>> {
    if skips.skips().len() != y.len() {
        return None;
    }
    let mut out = Vec::with_capacity(y.len());
    let mut from = 0;
    for (bit, &skip) in y.iter().zip(skips.skips()) {
        let mut pos = first_match(x, from, bit)?;
        for _ in 0..skip {
            pos = first_match(x, pos + 1, bit)?;
        }
        out.push(pos);
        from = pos + 1;
    }
    Some(out)
}

/// Number of pairs of length-`m` embeddings `(σ¹, σ²)` with `x1[σ¹] = x2[σ²]`.
///
/// Inclusion–exclusion over the last positions of both strings, keeping two
/// `(|x2| + 1) x (m + 1)` planes: `O(|x1| |x2| m)` time.
pub fn count_common_subsequences(x1: &BitString, x2: &BitString, m: usize) -> Result<BigUint> {
    let limit = x1.len().min(x2.len());
    if m > limit {
        return Err(Error::InvalidDimensions { n: limit, m });
    }
    let (a, b) = (x1.to_bytes(), x2.to_bytes());
    let width = m + 1;
    let idx = |n2: usize, k: usize| n2 * width + k;
    let mut prev = vec![BigUint::zero(); (b.len() + 1) * width];
    for n2 in 0..=b.len() {
        prev[idx(n2, 0)] = BigUint::one();
    }
    let mut cur = prev.clone();
    for &ai in &a {
        for k in 1..=m {
            cur[idx(0, k)] = BigUint::zero();
        }
        for n2 in 1..=b.len() {
            for k in 1..=m {
                let mut v = &prev[idx(n2, k)] + &cur[idx(n2 - 1, k)];
                if ai == b[n2 - 1] {
                    v += &prev[idx(n2 - 1, k - 1)];
                }
                v -= &prev[idx(n2 - 1, k)];
                cur[idx(n2, k)] = v;
            }
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Ok(prev.swap_remove(idx(b.len(), m)))
}

/// Length of a longest common subsequence.
pub fn lcs_length(x1: &BitString, x2: &BitString) -> usize {
    let (a, b) = (x1.to_bytes(), x2.to_bytes());
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = prev.clone();
    for &ai in &a {
        for j in 1..=b.len() {
            cur[j] = if ai == b[j - 1] { prev[j - 1] + 1 } else { prev[j].max(cur[j - 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}
