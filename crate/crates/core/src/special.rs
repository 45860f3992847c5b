//! Special functions and one-dimensional optimisation helpers.

/// Binary entropy `h(a) = -a ln a - (1-a) ln(1-a)` in nats, with `h(0) = h(1) = 0`.
pub fn binary_entropy(a: f64) -> f64 {
    if a <= 0.0 || a >= 1.0 {
        return 0.0;
    }
    -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

// B_{2k} / (2k) for k = 1..7.
const DIGAMMA_SERIES: [f64; 7] =
    [1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0];

// B_{2k} for k = 1..7.
const BERNOULLI: [f64; 7] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0];

const SHIFT: f64 = 8.0;

/// Digamma `Ψ(x)` for `x > 0`.
///
/// Shifts the argument to `x >= 8` with `Ψ(x) = Ψ(x+1) - 1/x`, then sums the
/// asymptotic series `ln x - 1/(2x) - Σ B_{2k} / (2k x^{2k})`.
pub fn digamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut x = x;
    while x < SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut tail = 0.0;
    for c in DIGAMMA_SERIES {
        tail += c * pow;
        pow *= inv2;
    }
    acc + x.ln() - 0.5 / x - tail
}

/// Trigamma `Ψ'(x)` for `x > 0`, by the same shift and the series
/// `1/x + 1/(2x²) + Σ B_{2k} / x^{2k+1}`.
pub fn trigamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    let mut x = x;
    while x < SHIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut pow = inv2 * inv;
    let mut tail = 0.0;
    for c in BERNOULLI {
        tail += c * pow;
        pow *= inv2;
    }
    acc + inv + 0.5 * inv2 + tail
}

/// Golden-section search for a minimum of a unimodal `f` on `[lo, hi]`.
///
/// Returns `(argmin, min)` once the bracket is narrower than `tol`.
pub fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut c = lo + r * (hi - lo);
    let (mut fa, mut fc) = (f(a), f(c));
    while hi - lo > tol {
        if fa < fc {
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
