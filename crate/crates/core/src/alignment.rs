//! Block-alignment statistics between an ambient string and a subsequence.
//!
//! `x` is cut into `B = N / b` blocks of length `b`; `y` is cut into `B`
//! contiguous blocks of lengths in `[0, b]`. A cut is *induced* when at most
//! `⌊γB⌋` blocks fall outside the window `[(1-δ)αb, (1+δ)αb]`, and
//! *standardized* when at most `⌊3γB⌋` blocks differ from their standard
//! length. Here `δ = b^{-1/2+ε}` and `γ = b^{-ε}`.

use crate::bitstring::BitString;
use crate::capacity::beta_alpha;
use crate::error::{check_open_unit, Error, Result};
use crate::montecarlo::subsequence_length;

/// `|#ones - #zeros|`.
pub fn displacement(z: &BitString) -> usize {
    let ones = z.count_ones();
    ones.abs_diff(z.len() - ones)
}

/// Majority bit, with ties counted as `1`.
fn majority(z: &BitString) -> bool {
    2 * z.count_ones() >= z.len()
}

/// `0` when the majorities of the blocks disagree, else `min(1, δ Δ(y_block))`.
pub fn local_alignment(x_block: &BitString, y_block: &BitString, delta: f64) -> f64 {
    if majority(x_block) != majority(y_block) {
        0.0
    } else {
        (delta * displacement(y_block) as f64).min(1.0)
    }
}

/// Window and budget parameters for block length `b` and ambient length `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignmentParams {
    pub alpha: f64,
    pub b: usize,
    pub n: usize,
    pub epsilon: f64,
    /// `b^{-1/2+ε}`.
    pub delta: f64,
    /// `b^{-ε}`.
    pub gamma: f64,
    /// Number of blocks `n / b`.
    pub big_b: usize,
    /// `β(α) / 40`, the margin above `1/2` required of good pairs.
    pub beta_star: f64,
}

impl AlignmentParams {
    pub fn new(alpha: f64, b: usize, n: usize) -> Result<Self> {
        Self::with_epsilon(alpha, b, n, 1.0 / 24.0)
    }

    /// `n` must be a positive multiple of `b`.
    pub fn with_epsilon(alpha: f64, b: usize, n: usize, epsilon: f64) -> Result<Self> {
        check_open_unit("alpha", alpha)?;
        check_open_unit("epsilon", epsilon)?;
        if b == 0 || b > n || !n.is_multiple_of(b) {
            return Err(Error::InvalidBlockLength { b, len: n });
        }
        let bf = b as f64;
        Ok(Self {
            alpha,
            b,
            n,
            epsilon,
            delta: bf.powf(-0.5 + epsilon),
            gamma: bf.powf(-epsilon),
            big_b: n / b,
            beta_star: beta_alpha(alpha)? / 40.0,
        })
    }

    /// `⌊γB⌋`.
    pub fn induced_budget(&self) -> usize {
        (self.gamma * self.big_b as f64).floor() as usize
    }

    /// `⌊3γB⌋`.
    pub fn standardized_budget(&self) -> usize {
        (3.0 * self.gamma * self.big_b as f64).floor() as usize
    }

    /// Whether `len` lies in `[(1-δ)αb, (1+δ)αb]`.
    pub fn in_window(&self, len: usize) -> bool {
        let target = self.alpha * self.b as f64;
        let len = len as f64;
        (1.0 - self.delta) * target <= len && len <= (1.0 + self.delta) * target
    }

    fn standard_prefix(&self, k: usize) -> usize {
        (self.alpha * self.b as f64 * k as f64 + 1e-9).floor() as usize
    }

    /// `⌊αb(i+1)⌋ - ⌊αb i⌋`: each is `⌊αb⌋` or `⌈αb⌉` and every prefix sum is within 1 of `αbk`.
    pub fn standard_length(&self, i: usize) -> usize {
        self.standard_prefix(i + 1) - self.standard_prefix(i)
    }

    /// `1/2 + β*`, the induced total alignment a good pair must reach.
    pub fn good_threshold(&self) -> f64 {
        0.5 + self.beta_star
    }

    /// `⌈b^ε⌉`, the longest run of ordinary blocks standardized together.
    pub fn run_length(&self) -> usize {
        ((self.b as f64).powf(self.epsilon) - 1e-12).ceil().max(1.0) as usize
    }
}

/// Lengths of the `B` consecutive blocks of a cut of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    lengths: Vec<usize>,
}

impl Partition {
    pub fn new(lengths: Vec<usize>) -> Self {
        Self { lengths }
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// The blocks of `y`; panics if the lengths do not sum to `|y|`.
    pub fn blocks(&self, y: &BitString) -> Vec<BitString> {
        assert_eq!(self.lengths.iter().sum::<usize>(), y.len(), "partition does not cover y");
        let mut start = 0;
        self.lengths
            .iter()
            .map(|&len| {
                start += len;
                y.slice(start - len, start)
            })
            .collect()
    }

    fn check_shape(&self, y: &BitString, p: &AlignmentParams) -> Result<()> {
        if self.lengths.len() != p.big_b {
            return Err(Error::InvalidPartition(format!("{} blocks, expected {}", self.lengths.len(), p.big_b)));
        }
        if let Some(len) = self.lengths.iter().find(|&&l| l > p.b) {
            return Err(Error::InvalidPartition(format!("block length {len} exceeds {}", p.b)));
        }
        let total: usize = self.lengths.iter().sum();
        if total != y.len() {
            return Err(Error::InvalidPartition(format!("lengths sum to {total}, string has length {}", y.len())));
        }
        Ok(())
    }

    /// Indices of blocks outside the induced window.
    pub fn exceptional_blocks(&self, p: &AlignmentParams) -> Vec<usize> {
        (0..self.lengths.len()).filter(|&i| !p.in_window(self.lengths[i])).collect()
    }

    pub fn is_induced(&self, y: &BitString, p: &AlignmentParams) -> bool {
        self.check_shape(y, p).is_ok() && self.exceptional_blocks(p).len() <= p.induced_budget()
    }

    pub fn is_standardized(&self, y: &BitString, p: &AlignmentParams) -> bool {
        let off_standard = self.lengths.iter().enumerate().filter(|&(i, &l)| l != p.standard_length(i)).count();
        self.check_shape(y, p).is_ok() && off_standard <= p.standardized_budget()
    }
}

fn check_ambient(x: &BitString, p: &AlignmentParams) -> Result<()> {
    if x.len() != p.n {
        return Err(Error::DimensionMismatch(format!("x has length {}, parameters expect {}", x.len(), p.n)));
    }
    Ok(())
}

/// `(1/B) Σ A_loc(x_i, y_i)` for one cut of `y`.
pub fn average_alignment(x: &BitString, y: &BitString, part: &Partition, p: &AlignmentParams) -> Result<f64> {
    check_ambient(x, p)?;
    part.check_shape(y, p)?;
    let total: f64 = part
        .blocks(y)
        .iter()
        .enumerate()
        .map(|(i, yb)| local_alignment(&x.slice(i * p.b, (i + 1) * p.b), yb, p.delta))
        .sum();
    Ok(total / p.big_b as f64)
}

/// Maximum of the average alignment over cuts with at most `budget` special blocks.
///
/// State `(block i, consumed j)` holds one value per special count `e`; each
/// transition shifts the whole `e` layer by 0 or 1, so the inner loop runs over
/// contiguous memory. When `budget >= B` the count is dropped.
fn best_average(
    x: &BitString,
    y: &BitString,
    p: &AlignmentParams,
    budget: usize,
    is_special: impl Fn(usize, usize) -> bool,
) -> Result<Option<f64>> {
    check_ambient(x, p)?;
    let (big_b, b, m) = (p.big_b, p.b, y.len());
    if m > big_b * b {
        return Ok(None);
    }
    let counted = budget < big_b;
    let layers = if counted { budget + 1 } else { 1 };
    let x_major: Vec<bool> = (0..big_b).map(|i| majority(&x.slice(i * b, (i + 1) * b))).collect();
    let mut walk = Vec::with_capacity(m + 1);
    walk.push(0i64);
    for bit in y.iter() {
        walk.push(walk[walk.len() - 1] + if bit { 1 } else { -1 });
    }
    let range = |i: usize| ((m).saturating_sub((big_b - i) * b), (i * b).min(m));

    let mut cur = vec![f64::NEG_INFINITY; (m + 1) * layers];
    let mut next = cur.clone();
    cur[0] = 0.0;
    for (i, &xm) in x_major.iter().enumerate() {
        next.fill(f64::NEG_INFINITY);
        let (lo, hi) = range(i);
        let (next_lo, next_hi) = range(i + 1);
        for s in lo..=hi {
            let src_row = &cur[s * layers..(s + 1) * layers];
            if src_row.iter().all(|v| *v == f64::NEG_INFINITY) {
                continue;
            }
            let first = next_lo.max(s);
            let last = next_hi.min(s + b);
            for t in first..=last {
                let len = t - s;
                let w = walk[t] - walk[s];
                let gain = if (w >= 0) != xm { 0.0 } else { (p.delta * w.unsigned_abs() as f64).min(1.0) };
                let shift = usize::from(counted && is_special(i, len));
                let width = (i + 1).min(layers - shift);
                let src = &cur[s * layers..s * layers + width];
                let dst = &mut next[t * layers + shift..t * layers + shift + width];
                for (d, &v) in dst.iter_mut().zip(src) {
                    *d = d.max(v + gain);
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let best = cur[m * layers..(m + 1) * layers].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((best > f64::NEG_INFINITY).then(|| best / big_b as f64))
}

/// Supremum of the average alignment over standardized cuts of `y`; `None` if there are none.
pub fn total_alignment_std(x: &BitString, y: &BitString, p: &AlignmentParams) -> Result<Option<f64>> {
    best_average(x, y, p, p.standardized_budget(), |i, len| len != p.standard_length(i))
}

/// Supremum of the average alignment over induced cuts of `y`; `None` if there are none.
pub fn total_alignment_ind(x: &BitString, y: &BitString, p: &AlignmentParams) -> Result<Option<f64>> {
    best_average(x, y, p, p.induced_budget(), |_, len| !p.in_window(len))
}

/// Map an induced cut to a standardized cut with the same concatenation.
///
/// Blocks are scanned left to right. A scan stops at the first exceptional
/// block, after `⌈b^ε⌉` ordinary blocks, or at the last block, whichever comes
/// first; a stop at the last block counts as the end of the pass. An
/// exceptional stop block is copied and the block before it absorbs the
/// slack; otherwise the stop block itself absorbs it. All other scanned blocks
/// get their standard length. An exceptional first block of a scan is copied
/// with nothing before it.
pub fn standardize(y: &BitString, part: &Partition, p: &AlignmentParams) -> Result<Partition> {
    part.check_shape(y, p)?;
    let exceptional: Vec<bool> = part.lengths.iter().map(|&l| !p.in_window(l)).collect();
    let count = exceptional.iter().filter(|&&e| e).count();
    if count > p.induced_budget() {
        return Err(Error::InvalidPartition(format!(
            "{count} exceptional blocks exceed the budget {}",
            p.induced_budget()
        )));
    }
    let ends: Vec<usize> = part
        .lengths
        .iter()
        .scan(0, |acc, &l| {
            *acc += l;
            Some(*acc)
        })
        .collect();
    let run = p.run_length();
    let last = p.big_b - 1;
    let mut out = Vec::with_capacity(p.big_b);
    let mut consumed = 0usize;
    let fill = |consumed: usize, end: usize| -> Result<usize> {
        end.checked_sub(consumed).filter(|&l| l <= p.b).ok_or_else(|| {
            Error::InvalidPartition(format!("standardization needs a block ending at {end} from {consumed}"))
        })
    };
    while out.len() < p.big_b {
        let start = out.len();
        let mut stop = start;
        let mut ordinary = 0;
        while !exceptional[stop] {
            ordinary += 1;
            if stop == last || ordinary == run {
                break;
            }
            stop += 1;
        }
        let filler = if exceptional[stop] { stop.checked_sub(1).filter(|&k| k >= start) } else { Some(stop) };
        for (k, &end) in ends.iter().enumerate().take(stop).skip(start) {
            let len = if Some(k) == filler { fill(consumed, end)? } else { p.standard_length(k) };
            out.push(len);
            consumed += len;
        }
        let len = if exceptional[stop] { part.lengths[stop] } else { fill(consumed, ends[stop])? };
        out.push(len);
        consumed += len;
    }
    Ok(Partition::new(out))
}

/// Whether the induced total alignment reaches `1/2 + β*`.
///
/// `y` must have length `⌊α |x|⌋`.
pub fn is_good(x: &BitString, y: &BitString, p: &AlignmentParams) -> Result<bool> {
    let expected = subsequence_length(p.alpha, x.len());
    if y.len() != expected {
        return Err(Error::DimensionMismatch(format!("y has length {}, expected {expected}", y.len())));
    }
    Ok(total_alignment_ind(x, y, p)?.is_some_and(|t| t >= p.good_threshold()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ties_count_as_ones() {
        let empty = BitString::new();
        assert!(majority(&empty));
        assert!(majority(&"10".parse().unwrap()));
        assert!(!majority(&"100".parse().unwrap()));
    }

    #[test]
    fn run_length_of_unit_block_is_one() {
        let p = AlignmentParams::new(0.5, 1, 4).unwrap();
        assert_eq!(p.run_length(), 1);
    }

    #[test]
    fn empty_y_has_one_cut() {
        let p = AlignmentParams::new(0.5, 4, 8).unwrap();
        let x: BitString = "11110000".parse().unwrap();
        // Both blocks are empty: the first matches the majority of x, the second does not.
        assert_eq!(total_alignment_std(&x, &BitString::new(), &p).unwrap(), Some(0.0));
    }
}
