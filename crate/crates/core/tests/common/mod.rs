//! Brute-force oracles shared by the integration tests.
//!
//! Everything here enumerates directly over subsets, embeddings or partitions
//! on plain `Vec<u8>` bit vectors and never calls the library's dynamic programs.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsm_core::BitString;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn bits(s: &BitString) -> Vec<u8> {
    s.iter().map(u8::from).collect()
}

pub fn bitstring(v: &[u8]) -> BitString {
    v.iter().map(|&b| b == 1).collect()
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random_range(0..2u8)).collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// All strictly increasing `m`-tuples from `0..n`, in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let need = m - cur.len();
        for i in start..=n.saturating_sub(need) {
            if n - i < need {
                break;
            }
            cur.push(i);
            rec(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        rec(0, n, m, &mut Vec::new(), &mut out);
    }
    out
}

pub fn embeddings(x: &[u8], y: &[u8]) -> Vec<Vec<usize>> {
    subsets(x.len(), y.len()).into_iter().filter(|s| s.iter().zip(y).all(|(&i, &b)| x[i] == b)).collect()
}

pub fn count(x: &[u8], y: &[u8]) -> u128 {
    embeddings(x, y).len() as u128
}

pub fn common_subsequence_pairs(x1: &[u8], x2: &[u8], m: usize) -> u128 {
    let s1 = subsets(x1.len(), m);
    let s2 = subsets(x2.len(), m);
    let mut total = 0u128;
    for a in &s1 {
        for b in &s2 {
            if a.iter().zip(b).all(|(&i, &j)| x1[i] == x2[j]) {
                total += 1;
            }
        }
    }
    total
}

pub fn lcs(x1: &[u8], x2: &[u8]) -> usize {
    let mut table = vec![vec![0usize; x2.len() + 1]; x1.len() + 1];
    for i in 1..=x1.len() {
        for j in 1..=x2.len() {
            table[i][j] =
                if x1[i - 1] == x2[j - 1] { table[i - 1][j - 1] + 1 } else { table[i - 1][j].max(table[i][j - 1]) };
        }
    }
    table[x1.len()][x2.len()]
}

/// Direct double sum of `2^{#agreements}` over all pairs of increasing maps.
pub fn direct_barz(n: usize, m: usize) -> u128 {
    let all = subsets(n, m);
    let mut total = 0u128;
    for s in &all {
        for t in &all {
            let overlap = s.iter().zip(t).filter(|(a, b)| a == b).count();
            total += 1u128 << overlap;
        }
    }
    total
}

pub fn all_strings(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0u64..(1u64 << n)).map(move |w| (0..n).map(|i| ((w >> i) & 1) as u8).collect())
}

/// Exact expectation of the planted embedding count over every `(X, σ*)`.
pub fn planted_mean_count(n: usize, m: usize) -> f64 {
    let subs = subsets(n, m);
    let mut total = 0u128;
    let mut cases = 0u128;
    for x in all_strings(n) {
        for s in &subs {
            let y: Vec<u8> = s.iter().map(|&i| x[i]).collect();
            total += count(&x, &y);
            cases += 1;
        }
    }
    total as f64 / cases as f64
}

/// Local alignment score computed straight from the block contents.
pub fn local_alignment(xb: &[u8], yb: &[u8], delta: f64) -> f64 {
    let walk = |v: &[u8]| v.iter().map(|&b| if b == 1 { 1i64 } else { -1 }).sum::<i64>();
    let (sx, sy) = (walk(xb), walk(yb));
    if (sx >= 0) != (sy >= 0) {
        0.0
    } else {
        (delta * sy.unsigned_abs() as f64).min(1.0)
    }
}

/// Every length vector in `[0, b]^blocks` summing to `total`.
pub fn length_vectors(blocks: usize, b: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, b: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for len in 0..=b.min(rest) {
            cur.push(len);
            rec(left - 1, b, rest - len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(blocks, b, total, &mut Vec::new(), &mut out);
    out
}

/// Best average alignment over all admissible length vectors, or `None` if none is admissible.
pub fn best_alignment(
    x: &[u8],
    y: &[u8],
    b: usize,
    blocks: usize,
    delta: f64,
    admissible: impl Fn(&[usize]) -> bool,
) -> Option<f64> {
    let mut best: Option<f64> = None;
    for lens in length_vectors(blocks, b, y.len()) {
        if !admissible(&lens) {
            continue;
        }
        let mut start = 0;
        let mut score = 0.0;
        for (i, &len) in lens.iter().enumerate() {
            score += local_alignment(&x[i * b..(i + 1) * b], &y[start..start + len], delta);
            start += len;
        }
        let avg = score / blocks as f64;
        best = Some(best.map_or(avg, |v: f64| v.max(avg)));
    }
    best
}

/// Golden-section maximiser used to cross-check closed forms.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut c = lo + r * (hi - lo);
    let (mut fa, mut fc) = (f(a), f(c));
    for _ in 0..iters {
        if fa > fc {
            hi = c;
            c = a;
            fc = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = c;
            fa = fc;
            c = lo + r * (hi - lo);
            fc = f(c);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Binary entropy in nats, written out independently of the library.
pub fn entropy(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

/// Standard normal CDF by composite Simpson integration of the density.
pub fn normal_cdf_simpson(z: f64) -> f64 {
    let steps = 20_000;
    let h = z / steps as f64;
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(0.0) + pdf(z);
    for k in 1..steps {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(k as f64 * h);
    }
    0.5 + s * h / 3.0
}
