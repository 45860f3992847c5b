//! Bounds on the uniform-codebook capacity of the binary deletion channel.
//!
//! With `α = 1 - p` the capacity is `α ln 2 - h(α) + f_pl(α)`, so every bound on
//! the planted free energy transfers to the capacity. Tiny constants are kept
//! as natural logarithms.

use crate::annealed::planted_annealed;
use crate::error::{check_closed_unit, check_open_unit, Error, Result};
use crate::special::{binary_entropy, normal_cdf};

const LN2: f64 = std::f64::consts::LN_2;
const LN10: f64 = std::f64::consts::LN_10;

/// `α ln 2 - h(α) + f_pl^ann(α)` with `α = 1 - p`; exactly `ln 2` at `p = 0`.
pub fn upper_bound_uniform_capacity(p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutOfDomain { name: "deletion probability", value: p, domain: "[0, 1)" });
    }
    if p == 0.0 {
        return Ok(LN2);
    }
    let alpha = 1.0 - p;
    Ok(alpha * LN2 - binary_entropy(alpha) + planted_annealed(alpha)?.value)
}

/// `max(0, ln 2 - h(p))` for `p <= 1/2`, zero beyond.
pub fn dgv_lower_bound(p: f64) -> Result<f64> {
    check_closed_unit("deletion probability", p)?;
    if p > 0.5 {
        return Ok(0.0);
    }
    Ok((LN2 - binary_entropy(p)).max(0.0))
}

/// `h(2α) / 2`, a lower bound on the null quenched free energy for `α < 1/2`.
pub fn skip_vector_lower_bound(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::OutOfDomain { name: "alpha", value: alpha, domain: "(0, 1/2)" });
    }
    Ok(binary_entropy(2.0 * alpha) / 2.0)
}

/// `P(N(α, α(1-α)) >= 0) - 1/2 = Φ(√(α/(1-α))) - 1/2`.
pub fn beta_alpha(alpha: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    Ok(normal_cdf((alpha / (1.0 - alpha)).sqrt()) - 0.5)
}

/// `ln(1920^96 / (α^24 β^96 (1-α)^12))`.
///
/// The integer ceiling of the constant is dropped; at this magnitude it moves
/// the logarithm by less than `1e-370`.
pub fn log_kappa(alpha: f64) -> Result<f64> {
    let beta = beta_alpha(alpha)?;
    Ok(96.0 * 1920f64.ln() - 24.0 * alpha.ln() - 96.0 * beta.ln() - 12.0 * (1.0 - alpha).ln())
}

/// `ln(β³ / (51200 κ⁵))` at `α = 1 - p`.
pub fn log_explicit_lower_bound(p: f64) -> Result<f64> {
    check_open_unit("deletion probability", p)?;
    let constants = ExplicitBoundConstants::new(1.0 - p)?;
    Ok(3.0 * constants.beta.ln() - 51200f64.ln() - 5.0 * constants.log_kappa)
}

/// The constants entering the explicit lower bound at one density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplicitBoundConstants {
    pub alpha: f64,
    pub beta: f64,
    /// `β / 40`, the alignment margin.
    pub beta_star: f64,
    pub log_kappa: f64,
}

impl ExplicitBoundConstants {
    pub fn new(alpha: f64) -> Result<Self> {
        let beta = beta_alpha(alpha)?;
        Ok(Self { alpha, beta, beta_star: beta / 40.0, log_kappa: log_kappa(alpha)? })
    }
}

/// A Monte Carlo value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
}

/// All capacity bounds at one deletion probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityBounds {
    pub p: f64,
    pub alpha: f64,
    pub lower_dgv: f64,
    pub upper_annealed: f64,
    /// `log10` of the explicit lower bound; `None` at `p = 0`.
    pub log10_explicit_lower: Option<f64>,
    pub mc_estimate: Option<McEstimate>,
}

impl CapacityBounds {
    pub fn analytic(p: f64) -> Result<Self> {
        let upper_annealed = upper_bound_uniform_capacity(p)?;
        let log10_explicit_lower = if p > 0.0 { Some(log_explicit_lower_bound(p)? / LN10) } else { None };
        Ok(Self {
            p,
            alpha: 1.0 - p,
            lower_dgv: dgv_lower_bound(p)?,
            upper_annealed,
            log10_explicit_lower,
            mc_estimate: None,
        })
    }

    pub fn with_estimate(self, estimate: McEstimate) -> Self {
        Self { mc_estimate: Some(estimate), ..self }
    }
}
