//! Numeric evaluators for the probabilistic machinery: Chernoff tails,
//! colour-set collision probabilities, Suen's inequality, and the
//! Hoelder-type ratio inequality checker.
//!
//! Everything is a deterministic pure function. Products of per-class
//! factors in `(0, 1]` are accumulated as sums of logarithms and
//! exponentiated once, so they do not underflow for large class counts.

use thiserror::Error;

use crate::numeric::one_minus_p_pow;

/// Absolute slack allowed when checking the ratio inequality.
pub const RATIO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ProbError {
    #[error("mu = {0} must be positive and finite")]
    BadMu(f64),
    #[error("delta = {0} must lie in {1}")]
    BadDelta(f64, &'static str),
    #[error("p = {0} is not in (0, 1)")]
    BadProbability(f64),
    #[error("class sizes must be non-empty with every kappa >= 1")]
    BadClassSizes,
    #[error("pair count {0} must be non-negative and finite")]
    BadPairCount(f64),
    #[error("max degree {0} must be non-negative and finite")]
    BadMaxDegree(f64),
    #[error("x = {0} must lie in [1/2, 1]")]
    BadX(f64),
    #[error("weight {0} must be positive and finite")]
    BadWeight(f64),
    #[error("x and beta must be non-empty and of equal length")]
    BadShape,
}

/// Lower Chernoff tail for a binomial with mean `mu`:
/// `P[X < (1-delta) mu] <= exp(-delta^2 mu / 2)`, for `0 < delta < 1`.
pub fn chernoff_lower(mu: f64, delta: f64) -> Result<f64, ProbError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ProbError::BadMu(mu));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(ProbError::BadDelta(delta, "(0, 1)"));
    }
    Ok((-delta * delta * mu / 2.0).exp())
}

/// Upper Chernoff tail for a binomial with mean `mu`:
/// `P[X > (1+delta) mu] <= exp(-delta^2 mu / (2 + delta))`, for `delta > 0`.
pub fn chernoff_upper(mu: f64, delta: f64) -> Result<f64, ProbError> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(ProbError::BadMu(mu));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(ProbError::BadDelta(delta, "(0, inf)"));
    }
    Ok((-delta * delta * mu / (2.0 + delta)).exp())
}

fn check_kappa_p(kappa: &[u64], p: f64) -> Result<(), ProbError> {
    if kappa.is_empty() || kappa.iter().any(|&k| k == 0) {
        return Err(ProbError::BadClassSizes);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(ProbError::BadProbability(p));
    }
    Ok(())
}

/// Probability that two vertices see the same colours across colour classes
/// of the given sizes: `prod_i (q_i^2 + (1-q_i)^2)` with `q_i = (1-p)^kappa_i`.
/// Per class, either both vertices miss it or both hit it.
pub fn collision_probability(kappa: &[u64], p: f64) -> Result<f64, ProbError> {
    check_kappa_p(kappa, p)?;
    let log_sum: f64 = kappa
        .iter()
        .map(|&k| {
            let q = one_minus_p_pow(p, k as f64);
            (q * q + (1.0 - q) * (1.0 - q)).ln()
        })
        .sum();
    Ok(log_sum.exp())
}

/// Three-vertex analogue of [`collision_probability`]:
/// `prod_i (q_i^3 + (1-q_i)^3)`.
pub fn collision_probability_triple(kappa: &[u64], p: f64) -> Result<f64, ProbError> {
    check_kappa_p(kappa, p)?;
    let log_sum: f64 = kappa
        .iter()
        .map(|&k| {
            let q = one_minus_p_pow(p, k as f64);
            let r = 1.0 - q;
            (q * q * q + r * r * r).ln()
        })
        .sum();
    Ok(log_sum.exp())
}

/// Inputs to [`suen_bound`]: colour-class sizes, the edge probability, the
/// number of pairs under consideration, and a maximum-degree proxy.
///
/// `max_deg` is explicit rather than hardwired to the a.a.s. value `2pn`:
/// callers may pass either the theoretical `2pn` or the observed maximum
/// degree, whichever conditioning they want. The neighbour-pair count is
/// then taken as `pair_count * 2 * max_deg`.
#[derive(Clone, Debug)]
pub struct SuenInputs {
    pub kappa: Vec<u64>,
    pub p: f64,
    pub pair_count: f64,
    pub max_deg: f64,
}

/// The three Suen quantities and the bound `exp(-mu + Delta e^{2 delta})`
/// on `P(X = 0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuenOutputs {
    pub mu: f64,
    pub delta_big: f64,
    pub delta_small: f64,
    pub bound: f64,
}

/// Evaluates Suen's inequality for the colour-set collision events:
///
/// - `mu = pair_count * P(collision)`
/// - `delta_big = pair_count * 2 max_deg * P(triple collision)`
/// - `delta_small = 2 max_deg * P(collision)`
/// - `bound = exp(-mu + delta_big * e^{2 delta_small})`
///
/// With `pair_count = 0` there are no events and all quantities are zero,
/// giving the vacuous bound 1; with `max_deg = 0` both correction terms
/// vanish and the bound reduces to `exp(-mu)` exactly.
pub fn suen_bound(inputs: &SuenInputs) -> Result<SuenOutputs, ProbError> {
    if !(inputs.pair_count >= 0.0 && inputs.pair_count.is_finite()) {
        return Err(ProbError::BadPairCount(inputs.pair_count));
    }
    if !(inputs.max_deg >= 0.0 && inputs.max_deg.is_finite()) {
        return Err(ProbError::BadMaxDegree(inputs.max_deg));
    }
    check_kappa_p(&inputs.kappa, inputs.p)?;
    if inputs.pair_count == 0.0 {
        return Ok(SuenOutputs {
            mu: 0.0,
            delta_big: 0.0,
            delta_small: 0.0,
            bound: 1.0,
        });
    }
    let pair = collision_probability(&inputs.kappa, inputs.p)?;
    let triple = collision_probability_triple(&inputs.kappa, inputs.p)?;
    let mu = inputs.pair_count * pair;
    let delta_big = inputs.pair_count * 2.0 * inputs.max_deg * triple;
    let delta_small = 2.0 * inputs.max_deg * pair;
    Ok(SuenOutputs {
        mu,
        delta_big,
        delta_small,
        bound: (-mu + delta_big * (2.0 * delta_small).exp()).exp(),
    })
}

/// Result of the ratio inequality check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoelderCheck {
    /// `prod (x_i^3 + (1-x_i)^3)^{beta_i} / prod (x_i^2 + (1-x_i)^2)^{beta_i}`
    pub lhs: f64,
    /// `((3s - 1) / (2s))^{sum beta_i}`
    pub rhs: f64,
    /// Weighted geometric mean of the square terms.
    pub s: f64,
    /// `lhs <= rhs + RATIO_TOLERANCE`
    pub holds: bool,
}

/// Checks the Hoelder-type ratio inequality: with `s` the beta-weighted
/// geometric mean of `x_i^2 + (1-x_i)^2`, the weighted cube/square ratio
/// product is at most `((3s-1)/(2s))^{sum beta}`, with equality when all
/// `x_i` coincide. Unit weights give the plain product form.
pub fn hoelder_ratio_check(x: &[f64], beta: &[f64]) -> Result<HoelderCheck, ProbError> {
    if x.is_empty() || x.len() != beta.len() {
        return Err(ProbError::BadShape);
    }
    for &xi in x {
        if !(0.5..=1.0).contains(&xi) {
            return Err(ProbError::BadX(xi));
        }
    }
    for &b in beta {
        if !(b > 0.0 && b.is_finite()) {
            return Err(ProbError::BadWeight(b));
        }
    }

    let total: f64 = beta.iter().sum();
    let mut log_s_sum = 0.0;
    let mut log_lhs = 0.0;
    for (&xi, &bi) in x.iter().zip(beta) {
        let yi = 1.0 - xi;
        let square = xi * xi + yi * yi;
        let cube = xi * xi * xi + yi * yi * yi;
        log_s_sum += bi * square.ln();
        log_lhs += bi * (cube.ln() - square.ln());
    }
    let s = (log_s_sum / total).exp();
    let lhs = log_lhs.exp();
    let rhs = (total * ((3.0 * s - 1.0) / (2.0 * s)).ln()).exp();
    Ok(HoelderCheck {
        lhs,
        rhs,
        s,
        holds: lhs <= rhs + RATIO_TOLERANCE,
    })
}
