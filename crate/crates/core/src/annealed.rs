//! Annealed free energies and the variational formula for the planted law.
//!
//! The planted annealed free energy is `R(α) - h(α) - α ln 2` where
//! `R(α) = max_ρ g(ρ)` and
//!
//! ```text
//! g(ρ) = αρ ln Z(x(ρ), y(ρ)) - ln x(ρ) - α ln y(ρ),
//! Z(x, y) = Σ_{a>=1} Σ_{b=1..a} C(a-1, b-1)² x^a y^b = xy / sqrt(D),
//! D = (1 - x - xy)² - 4x²y = (1 - x(1+√y)²)(1 - x(1-√y)²).
//! ```
//!
//! The maximiser `ρ*` solves `Z(x(ρ), y(ρ)) = 1`, where `g` reduces to
//! `-ln x - α ln y` with `x`, `y` in closed form.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{check_open_unit, check_positive, Error, Result};
use crate::special::{binary_entropy, digamma, golden_section_min, trigamma};

const LN2: f64 = std::f64::consts::LN_2;

/// Largest ambient length accepted by [`barz_exact`].
pub const BARZ_MAX_N: usize = 14;

const MAX_SHELLS: usize = 100_000;

/// `h(α) - α ln 2`: the annealed free energy of the null law.
pub fn null_annealed(alpha: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    Ok(binary_entropy(alpha) - alpha * LN2)
}

fn check_convergent(x: f64, y: f64) -> Result<()> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::OutOfDomain {
            name: "pair generating function argument",
            value: x.min(y),
            domain: "(0, inf)",
        });
    }
    if x * (1.0 + y.sqrt()).powi(2) >= 1.0 {
        return Err(Error::DivergentSeries { x, y });
    }
    Ok(())
}

/// `Z(x, y) = xy / sqrt(D)`, defined for `x (1 + √y)² < 1`.
pub fn pair_mgf_closed_form(x: f64, y: f64) -> Result<f64> {
    check_convergent(x, y)?;
    let s = y.sqrt();
    let d = (1.0 - x * (1.0 + s).powi(2)) * (1.0 - x * (1.0 - s).powi(2));
    Ok(x * y / d.sqrt())
}

/// `ln Σ_k C(m, k)² y^k + m ln x`, summed in log space.
fn log_shell(m: usize, ln_x: f64, ln_y: f64) -> f64 {
    let mut terms = Vec::with_capacity(m + 1);
    let mut t = m as f64 * ln_x;
    terms.push(t);
    for k in 0..m {
        t += 2.0 * ((m - k) as f64 / (k + 1) as f64).ln() + ln_y;
        terms.push(t);
    }
    let hi = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi + terms.iter().map(|v| (v - hi).exp()).sum::<f64>().ln()
}

/// The double series for `Z(x, y)`, summed shell by shell in `a`.
///
/// Stops once the geometric tail estimated from the ratio of consecutive
/// shells drops below the absolute tolerance `tol`.
pub fn pair_mgf_series(x: f64, y: f64, tol: f64) -> Result<f64> {
    check_convergent(x, y)?;
    check_positive("tolerance", tol)?;
    let (ln_x, ln_y) = (x.ln(), y.ln());
    let prefix = x * y;
    let mut sum = 0.0;
    let mut prev = f64::NAN;
    for m in 0..MAX_SHELLS {
        let shell = prefix * log_shell(m, ln_x, ln_y).exp();
        sum += shell;
        if m > 0 {
            let ratio = shell / prev;
            if ratio < 1.0 && shell * ratio / (1.0 - ratio) < tol {
                return Ok(sum);
            }
        }
        prev = shell;
    }
    Err(Error::SeriesDiverged { shells: MAX_SHELLS })
}

fn check_rho(rho: f64) -> Result<f64> {
    check_open_unit("rho", rho)
}

/// `x(ρ) = (1-α)(2-2α+αρ) / (2-αρ)`.
pub fn x_of_rho(alpha: f64, rho: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    check_rho(rho)?;
    Ok((1.0 - alpha) * (2.0 - 2.0 * alpha + alpha * rho) / (2.0 - alpha * rho))
}

/// `y(ρ) = α²(2-ρ)(1-ρ) / ((1-α)(2-2α+αρ))`.
pub fn y_of_rho(alpha: f64, rho: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    check_rho(rho)?;
    Ok(alpha * alpha * (2.0 - rho) * (1.0 - rho) / ((1.0 - alpha) * (2.0 - 2.0 * alpha + alpha * rho)))
}

/// `Z(x(ρ), y(ρ)) = α(1-ρ)√(2-ρ) / (√ρ √((2-αρ)(2-2α+αρ)))`.
pub fn z_of_rho(alpha: f64, rho: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    check_rho(rho)?;
    let denom = (rho * (2.0 - alpha * rho) * (2.0 - 2.0 * alpha + alpha * rho)).sqrt();
    Ok(alpha * (1.0 - rho) * (2.0 - rho).sqrt() / denom)
}

/// The variational quantities at one `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationalPoint {
    pub rho: f64,
    pub x: f64,
    pub y: f64,
    pub z_value: f64,
    /// `Φ(ρ) = g(ρ) / (αρ)`.
    pub phi: f64,
    /// `g(ρ) = αρ Φ(ρ)`.
    pub objective: f64,
}

pub fn variational_point(alpha: f64, rho: f64) -> Result<VariationalPoint> {
    let x = x_of_rho(alpha, rho)?;
    let y = y_of_rho(alpha, rho)?;
    let z_value = z_of_rho(alpha, rho)?;
    let objective = alpha * rho * z_value.ln() - x.ln() - alpha * y.ln();
    Ok(VariationalPoint { rho, x, y, z_value, phi: objective / (alpha * rho), objective })
}

pub fn phi_of_rho(alpha: f64, rho: f64) -> Result<f64> {
    Ok(variational_point(alpha, rho)?.phi)
}

pub fn objective_of_rho(alpha: f64, rho: f64) -> Result<f64> {
    Ok(variational_point(alpha, rho)?.objective)
}

/// Root in `(0, 1)` of `2α²ρ² + (4α - 5α² - 4)ρ + 2α² = 0`.
///
/// The roots multiply to 1; the small one is taken as `c / q` to avoid cancellation.
pub fn rho_star(alpha: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    let a = 2.0 * alpha * alpha;
    let b = 4.0 * alpha - 5.0 * alpha * alpha - 4.0;
    let disc = b * b - 4.0 * a * a;
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let roots = [q / a, a / q];
    roots.into_iter().find(|r| *r > 0.0 && *r < 1.0).ok_or(Error::OutOfDomain {
        name: "alpha",
        value: alpha,
        domain: "(0, 1)",
    })
}

/// The closed-form planted annealed solution at density `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealedPlantedSolution {
    pub alpha: f64,
    /// `Δ = √(9α² - 4α + 4)`.
    pub delta: f64,
    /// `x = (Δ - 3α) / 2`.
    pub x: f64,
    /// `y = (1-x)² / (2x(1+x))`.
    pub y: f64,
    pub rho_star: f64,
    /// `R - h(α) - α ln 2`.
    pub value: f64,
    /// `R = -ln x - α ln y`, the limit of `(1/N) ln Σ_{σ,τ} 2^{⟨σ,τ⟩}`.
    pub raw: f64,
}

pub fn planted_annealed(alpha: f64) -> Result<AnnealedPlantedSolution> {
    check_open_unit("alpha", alpha)?;
    let delta = (9.0 * alpha * alpha - 4.0 * alpha + 4.0).sqrt();
    let x = (delta - 3.0 * alpha) / 2.0;
    let y = (1.0 - x).powi(2) / (2.0 * x * (1.0 + x));
    let raw = -x.ln() - alpha * y.ln();
    Ok(AnnealedPlantedSolution {
        alpha,
        delta,
        x,
        y,
        rho_star: rho_star(alpha)?,
        value: raw - binary_entropy(alpha) - alpha * LN2,
        raw,
    })
}

fn binomial_table(n: usize) -> Vec<Vec<BigUint>> {
    let mut table = vec![vec![BigUint::zero(); n + 1]; n + 1];
    for i in 0..=n {
        table[i][0] = BigUint::one();
        for j in 1..=i {
            table[i][j] = &table[i - 1][j - 1] + &table[i - 1][j];
        }
    }
    table
}

/// `Σ_{σ,τ} 2^{⟨σ,τ⟩}` over pairs of `m`-subsets of `n` positions, where
/// `⟨σ,τ⟩` counts indices `i` with `σ_i = τ_i`.
///
/// Expands `2^k` as a sum over subsets of shared points; between consecutive
/// shared points both subsets fill the gaps independently, giving
/// `F[A][B] = Σ F[A-a][B-b] C(a-1, b-1)²` with `F[0][0] = 1` and result `F[n+1][m+1]`.
pub fn barz_exact(n: usize, m: usize) -> Result<BigUint> {
    if m > n {
        return Err(Error::InvalidDimensions { n, m });
    }
    if n > BARZ_MAX_N {
        return Err(Error::OutOfOracleRange { n, m, max: BARZ_MAX_N });
    }
    let binom = binomial_table(n + 1);
    let weight = |a: usize, b: usize| -> BigUint {
        let c = &binom[a - 1][b - 1];
        c * c
    };
    let mut table = vec![vec![BigUint::zero(); m + 2]; n + 2];
    table[0][0] = BigUint::one();
    for big_a in 1..=n + 1 {
        for big_b in 1..=(m + 1).min(big_a) {
            let mut acc = BigUint::zero();
            for a in 1..=big_a {
                for b in 1..=big_b.min(a) {
                    let prev = &table[big_a - a][big_b - b];
                    if !prev.is_zero() {
                        acc += prev * weight(a, b);
                    }
                }
            }
            table[big_a][big_b] = acc;
        }
    }
    Ok(table[n + 1][m + 1].clone())
}

/// Minimiser and minimum of the Strict-Weak free-energy functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictWeakSolution {
    pub lambda: f64,
    pub value: f64,
}

/// `inf_{λ>0} -(1-α)Ψ(λ) + Ψ(a+λ) + α ln b` for i.i.d. Gamma weights with
/// shape `a` and scale `b`.
///
/// The derivative `-(1-α)Ψ'(λ) + Ψ'(a+λ)` is negative near 0 and positive for
/// large `λ`. The bracket is widened until the sign changes, golden-section
/// search locates the minimum and bisection on the derivative sharpens `λ`.
pub fn strict_weak_value(shape: f64, scale: f64, alpha: f64) -> Result<StrictWeakSolution> {
    check_positive("shape", shape)?;
    check_positive("scale", scale)?;
    check_open_unit("alpha", alpha)?;
    let objective = |lambda: f64| -(1.0 - alpha) * digamma(lambda) + digamma(shape + lambda) + alpha * scale.ln();
    let slope = |lambda: f64| -(1.0 - alpha) * trigamma(lambda) + trigamma(shape + lambda);

    let mut lo = 1e-3;
    while slope(lo) >= 0.0 {
        lo /= 2.0;
        if lo < 1e-12 {
            return Err(Error::NoInteriorMinimum);
        }
    }
    let mut hi = 1.0;
    while slope(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoInteriorMinimum);
        }
    }
    let (guess, _) = golden_section_min(objective, lo, hi, 1e-6 * (hi - lo));
    let step = 1e-5 * (hi - lo);
    let (mut a, mut b) = ((guess - step).max(lo), (guess + step).min(hi));
    if slope(a) > 0.0 || slope(b) < 0.0 {
        (a, b) = (lo, hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if slope(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let lambda = 0.5 * (a + b);
    Ok(StrictWeakSolution { lambda, value: objective(lambda) })
}
