//! Closed-form right-hand sides of the concentration inequalities, their
//! validity ranges, the multiplier recursion, and exact analytic oracles.
//!
//! All tail evaluators return min(1, 2·exp(−c·shape)) and are total; the
//! exponent falls back to log-space arithmetic whenever d·n^{d−1} or t²
//! leaves the double range, so nothing overflows for d·log n up to 10⁶.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The absolute constants the inequalities leave unspecified. Experiments fit
/// an empirical ĉ from data rather than trusting these defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    /// Constant in the exponents, default 0.1.
    pub c: f64,
    /// Constant in the MGF bounds, default 2.0.
    pub big_c: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { c: 0.1, big_c: 2.0 }
    }
}

impl BoundParams {
    pub fn new(c: f64, big_c: f64) -> Result<Self> {
        if c.is_nan() || c <= 0.0 || big_c.is_nan() || big_c <= 0.0 {
            return Err(Error::config(format!(
                "bound constants must be positive, got c = {c}, C = {big_c}"
            )));
        }
        Ok(BoundParams { c, big_c })
    }

    pub fn with_c(c: f64) -> Self {
        BoundParams {
            c,
            ..Default::default()
        }
    }
}

/// t²/(d·n^{d−1}·scale²), in log space when the direct route overflows.
/// Returns +∞ when t is so large the exponent leaves the double range.
pub fn tail_exponent_shape(t: f64, n: usize, d: usize, scale: f64) -> f64 {
    debug_assert!(t >= 0.0 && scale > 0.0 && n >= 1 && d >= 1);
    if t == 0.0 {
        return 0.0;
    }
    let denom = d as f64 * (n as f64).powi(d as i32 - 1) * scale * scale;
    let num = t * t;
    if num.is_finite() && denom.is_finite() && denom > 0.0 {
        return num / denom;
    }
    let log_shape =
        2.0 * t.ln() - ((d as f64).ln() + (d as f64 - 1.0) * (n as f64).ln() + 2.0 * scale.ln());
    if log_shape >= 709.0 {
        f64::INFINITY
    } else {
        log_shape.exp()
    }
}

fn capped_exponential(c: f64, shape: f64) -> f64 {
    // min(1, 2 exp(-c·shape)); the cap absorbs the vacuous region.
    (2.0 * (-c * shape).exp()).min(1.0)
}

/// min(1, 2·exp(−c·t²/(d·n^{d−1}·lip²))) — the convex concentration tail.
pub fn convex_tensor_bound(t: f64, n: usize, d: usize, lip: f64, params: &BoundParams) -> f64 {
    capped_exponential(params.c, tail_exponent_shape(t, n, d, lip))
}

/// Same tail with the Lipschitz norm replaced by the operator norm of A.
pub fn euclidean_tensor_bound(
    t: f64,
    n: usize,
    d: usize,
    op_norm: f64,
    params: &BoundParams,
) -> f64 {
    capped_exponential(params.c, tail_exponent_shape(t, n, d, op_norm))
}

/// Tail bound for the norm product ∏‖xᵢ‖₂ exceeding n^{d/2} + t.
pub fn norm_product_bound(t: f64, n: usize, d: usize, params: &BoundParams) -> f64 {
    capped_exponential(params.c, tail_exponent_shape(t, n, d, 1.0))
}

/// The stated range of the norm-product tail: 0 ≤ t ≤ 2·n^{d/2}.
pub fn norm_product_in_range(t: f64, n: usize, d: usize) -> bool {
    t >= 0.0 && t.ln() <= 2.0f64.ln() + 0.5 * d as f64 * (n as f64).ln()
}

/// min(1, 2·exp(−c·n·u²/d)) — the running-max tail over all prefixes.
pub fn maximal_bound(u: f64, n: usize, d: usize, params: &BoundParams) -> f64 {
    capped_exponential(params.c, maximal_exponent_shape(u, n, d))
}

/// n·u²/d, the exponent shape of the running-max tail.
pub fn maximal_exponent_shape(u: f64, n: usize, d: usize) -> f64 {
    n as f64 * u * u / d as f64
}

/// The stated range of the running-max tail: 0 ≤ u ≤ 2.
pub fn maximal_in_range(u: f64) -> bool {
    (0.0..=2.0).contains(&u)
}

/// Tail bound for |dist(X, L) − √k|; same functional form as the norm
/// product (the projection has unit operator norm).
pub fn dist_bound(t: f64, n: usize, d: usize, params: &BoundParams) -> f64 {
    norm_product_bound(t, n, d, params)
}

/// The quantity 2·scale that delimits where a tail inequality applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ValidityScale {
    /// (E f(X)²)^{1/2} for convex concentration.
    MeanSquareRoot(f64),
    /// ‖A‖_HS for Euclidean concentration.
    HilbertSchmidt(f64),
    /// n^{d/2}·lip, the wider range both tails actually admit.
    Wide { n: usize, d: usize, lip: f64 },
}

impl ValidityScale {
    pub fn value(&self) -> f64 {
        match *self {
            ValidityScale::MeanSquareRoot(s) | ValidityScale::HilbertSchmidt(s) => s,
            ValidityScale::Wide { n, d, lip } => {
                (0.5 * d as f64 * (n as f64).ln() + lip.ln()).exp()
            }
        }
    }
}

/// true iff 0 ≤ t ≤ 2·scale (boundary included).
pub fn validity_range(t: f64, scale: &ValidityScale) -> bool {
    t >= 0.0 && t <= 2.0 * scale.value()
}

/// exp(C·λ²·hs²) — the subgaussian chaos MGF bound. The same evaluator
/// serves the Euclidean form with hs² replaced by lip²·E f².
pub fn chaos_mgf_bound(lambda: f64, hs_norm: f64, params: &BoundParams) -> f64 {
    chaos_mgf_bound_log(lambda, hs_norm, params).exp()
}

pub fn chaos_mgf_bound_log(lambda: f64, hs_norm: f64, params: &BoundParams) -> f64 {
    params.big_c * lambda * lambda * hs_norm * hs_norm
}

/// Validity of the matrix form: |λ| ≤ c/‖M‖_op.
pub fn chaos_mgf_valid_matrix(lambda: f64, m_op_norm: f64, params: &BoundParams) -> bool {
    lambda.abs() * m_op_norm <= params.c
}

/// Validity of the Euclidean form: |λ| ≤ c/‖f‖_Lip². The two coincide for
/// M = AᵀA, where ‖M‖_op = ‖A‖_op² = ‖f‖_Lip².
pub fn chaos_mgf_valid_euclidean(lambda: f64, lip: f64, params: &BoundParams) -> bool {
    lambda.abs() * lip * lip <= params.c
}

/// E exp(λ(xᵀMx − tr M)) for standard normal x and symmetric M with the given
/// eigenvalues: ∏ᵢ (1 − 2λμᵢ)^{−1/2}·e^{−λμᵢ}, valid for 2|λ|·max|μᵢ| < 1.
pub fn gaussian_chaos_mgf_exact(eigenvalues: &[f64], lambda: f64) -> Result<f64> {
    let max_abs = eigenvalues.iter().fold(0.0f64, |a, &m| a.max(m.abs()));
    let product = 2.0 * lambda.abs() * max_abs;
    if product >= 1.0 {
        return Err(Error::DivergentMgf { lambda, product });
    }
    let log_sum: f64 = eigenvalues
        .iter()
        .map(|&mu| -0.5 * (1.0 - 2.0 * lambda * mu).ln() - lambda * mu)
        .sum();
    Ok(log_sum.exp())
}

/// The sequence λₖ = λₖ₋₁ + M·λₖ₋₁² together with the two verdicts:
/// whether the hypothesis |λ₀| ≤ 1/(8dM) holds, and whether the conclusions
/// |λₖ| ≤ 1/(6dM) and λₖ ≤ λ₀ + 2kMλ₀² hold for every k.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierSchedule {
    pub lambda0: f64,
    pub m_coeff: f64,
    pub d: usize,
    /// λ₀, λ₁, …, λ_d.
    pub sequence: Vec<f64>,
    pub hypothesis_ok: bool,
    pub bounds_ok: bool,
}

pub fn multipliers(lambda0: f64, m_coeff: f64, d: usize) -> MultiplierSchedule {
    debug_assert!(m_coeff >= 0.0 && d >= 1);
    let mut sequence = Vec::with_capacity(d + 1);
    sequence.push(lambda0);
    let mut lambda = lambda0;
    for _ in 0..d {
        lambda = lambda + m_coeff * lambda * lambda;
        sequence.push(lambda);
    }
    let hyp_limit = 1.0 / (8.0 * d as f64 * m_coeff); // +inf when M = 0
    let concl_limit = 1.0 / (6.0 * d as f64 * m_coeff);
    let hypothesis_ok = lambda0.abs() <= hyp_limit;
    let bounds_ok = sequence.iter().enumerate().skip(1).all(|(k, &lk)| {
        lk.abs() <= concl_limit && lk <= lambda0 + 2.0 * k as f64 * m_coeff * lambda0 * lambda0
    });
    MultiplierSchedule {
        lambda0,
        m_coeff,
        d,
        sequence,
        hypothesis_ok,
        bounds_ok,
    }
}

/// The scale d·n^{d−1} against which Var(‖X‖₂) is normalized.
pub fn variance_prediction(n: usize, d: usize) -> f64 {
    debug_assert!(n >= 2 && d >= 1);
    d as f64 * (n as f64).powi(d as i32 - 1)
}
