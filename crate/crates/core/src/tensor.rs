//! Factor-form simple tensors and the multiplicative identities that make
//! them computable without materializing n^d coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rand_sources::{sample_factors, DistSpec, SeedSpec};

/// Densification refuses above this many coordinates (~128 MB of f64).
pub const DENSIFY_LIMIT: u64 = 1 << 24;

/// x₁ ⊗ ⋯ ⊗ x_d held as its d factor vectors, each of length n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleTensor {
    factors: Vec<Vec<f64>>,
}

impl SimpleTensor {
    pub fn new(factors: Vec<Vec<f64>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::shape("a simple tensor needs at least one factor"));
        }
        let n = factors[0].len();
        if n == 0 {
            return Err(Error::shape("factor vectors must be nonempty"));
        }
        if factors.iter().any(|f| f.len() != n) {
            return Err(Error::shape(format!(
                "all factors must share length {n}, got {:?}",
                factors.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        Ok(SimpleTensor { factors })
    }

    pub fn sample(dist: &DistSpec, n: usize, d: usize, seed: SeedSpec) -> Self {
        debug_assert!(n >= 1 && d >= 1);
        SimpleTensor {
            factors: sample_factors(dist, n, d, seed),
        }
    }

    pub fn factors(&self) -> &[Vec<f64>] {
        &self.factors
    }

    pub fn n(&self) -> usize {
        self.factors[0].len()
    }

    pub fn d(&self) -> usize {
        self.factors.len()
    }

    /// n^d as u128 (exact while it fits; used for dense-limit checks).
    pub fn ambient_dim(&self) -> Option<u128> {
        checked_ambient_dim(self.n(), self.d())
    }

    pub fn same_shape(&self, other: &SimpleTensor) -> bool {
        self.n() == other.n() && self.d() == other.d()
    }
}

pub fn checked_ambient_dim(n: usize, d: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.checked_mul(n as u128)?;
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc)
}

/// Fully materialized coordinates, mode 1 slowest:
/// flat index = i₁·n^{d−1} + i₂·n^{d−2} + ⋯ + i_d.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    pub entries: Vec<f64>,
    pub n: usize,
    pub d: usize,
}

pub fn densify(x: &SimpleTensor) -> Result<DenseVector> {
    let dim = x.ambient_dim().unwrap_or(u128::MAX);
    if dim > u128::from(DENSIFY_LIMIT) {
        return Err(Error::SizeLimit {
            requested: dim,
            limit: DENSIFY_LIMIT,
        });
    }
    // Iterated Kronecker expansion reproduces the mode-1-slowest layout.
    let mut entries = vec![1.0];
    for factor in x.factors() {
        let mut next = Vec::with_capacity(entries.len() * factor.len());
        for &e in &entries {
            for &f in factor {
                next.push(e * f);
            }
        }
        entries = next;
    }
    Ok(DenseVector {
        entries,
        n: x.n(),
        d: x.d(),
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// ‖x₁ ⊗ ⋯ ⊗ x_d‖₂ = ∏ₖ ‖xₖ‖₂, accumulated as a sum of logs once d > 8 so
/// the product cannot overflow at n^{d/2}.
pub fn tensor_norm(x: &SimpleTensor) -> f64 {
    if x.d() <= 8 {
        x.factors().iter().map(|f| norm2(f)).product()
    } else {
        log_tensor_norm(x).exp()
    }
}

/// ln ∏ₖ ‖xₖ‖₂ (−∞ when any factor is zero).
pub fn log_tensor_norm(x: &SimpleTensor) -> f64 {
    x.factors().iter().map(|f| norm2(f).ln()).sum()
}

/// ∏ₖ ⟨xₖ, yₖ⟩ = ⟨x₁⊗⋯⊗x_d, y₁⊗⋯⊗y_d⟩.
pub fn tensor_inner(x: &SimpleTensor, y: &SimpleTensor) -> Result<f64> {
    if !x.same_shape(y) {
        return Err(Error::shape(format!(
            "inner product needs equal shapes, got (n={}, d={}) vs (n={}, d={})",
            x.n(),
            x.d(),
            y.n(),
            y.d()
        )));
    }
    Ok(x.factors()
        .iter()
        .zip(y.factors())
        .map(|(a, b)| dot(a, b))
        .product())
}

/// max over k = 1..d of n^{−k/2} ∏_{i≤k} ‖xᵢ‖₂, accumulated in log space.
pub fn running_max_statistic(x: &SimpleTensor) -> f64 {
    running_prefix_statistics(x).0
}

/// (max over prefixes, full-product prefix) of n^{−k/2} ∏_{i≤k} ‖xᵢ‖₂, both
/// read off one log-space accumulation, so max ≥ full holds exactly.
pub fn running_prefix_statistics(x: &SimpleTensor) -> (f64, f64) {
    let half_ln_n = 0.5 * (x.n() as f64).ln();
    let mut acc = 0.0f64;
    let mut best = f64::NEG_INFINITY;
    for f in x.factors() {
        acc += norm2(f).ln() - half_ln_n;
        if acc > best {
            best = acc;
        }
    }
    (best.exp(), acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rand_sources::{DistSpec, SeedSpec};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn t(factors: &[&[f64]]) -> SimpleTensor {
        SimpleTensor::new(factors.iter().map(|f| f.to_vec()).collect()).unwrap()
    }

    #[test]
    fn densify_basis_tensor() {
        let x = t(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(densify(&x).unwrap().entries, vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn densify_two_by_two() {
        let x = t(&[&[1.0, 2.0], &[3.0, 4.0]]);
        assert_eq!(densify(&x).unwrap().entries, vec![3.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn densify_single_mode_is_identity() {
        let x = t(&[&[0.5, -1.5, 2.0]]);
        assert_eq!(densify(&x).unwrap().entries, vec![0.5, -1.5, 2.0]);
    }

    #[test]
    fn densify_refuses_large_tensors() {
        let x = SimpleTensor::sample(
            &DistSpec::rademacher(),
            2,
            30, // 2^30 > 2^24
            SeedSpec::new(0, 0, 0),
        );
        match densify(&x) {
            Err(crate::error::Error::SizeLimit { requested, limit }) => {
                assert_eq!(requested, 1 << 30);
                assert_eq!(limit, DENSIFY_LIMIT);
            }
            other => panic!("expected size-limit refusal, got {other:?}"),
        }
    }

    #[test]
    fn norm_is_product_of_factor_norms() {
        let x = t(&[&[2.0, 0.0], &[0.0, 3.0]]);
        assert_eq!(tensor_norm(&x), 6.0);
    }

    #[test]
    fn norm_matches_dense_oracle() {
        let x = SimpleTensor::sample(&DistSpec::standard_normal(), 4, 3, SeedSpec::new(3, 0, 0));
        let dense = densify(&x).unwrap();
        let dense_norm = dense.entries.iter().map(|e| e * e).sum::<f64>().sqrt();
        assert_relative_eq!(tensor_norm(&x), dense_norm, max_relative = 1e-12);
    }

    #[test]
    fn zero_factor_annihilates_norm() {
        let x = t(&[&[0.0, 0.0], &[1.0, 2.0]]);
        assert_eq!(tensor_norm(&x), 0.0);
    }

    #[test]
    fn log_norm_is_consistent_for_large_degree() {
        let x = SimpleTensor::sample(&DistSpec::rademacher(), 16, 64, SeedSpec::new(9, 0, 0));
        // Rademacher factors have norm 4 exactly, so log-norm = 64 ln 4.
        assert_relative_eq!(
            log_tensor_norm(&x),
            64.0 * 4.0f64.ln(),
            max_relative = 1e-12
        );
        assert!(tensor_norm(&x).is_finite());
    }

    #[test]
    fn norm_squared_expectation_is_n_to_the_d() {
        // E‖X‖² = n^d for unit-variance coordinates; Rademacher attains it
        // exactly in every trial
        for trial in 0..20 {
            let x = SimpleTensor::sample(&DistSpec::rademacher(), 4, 3, SeedSpec::new(6, trial, 0));
            let nrm = tensor_norm(&x);
            assert_eq!(nrm * nrm, 64.0);
        }
        // Monte Carlo check for the gaussian law: mean of ‖X‖² within 5 rel-%
        let trials = 20_000u64;
        let mut sum = 0.0;
        for trial in 0..trials {
            let x = SimpleTensor::sample(
                &DistSpec::standard_normal(),
                5,
                2,
                SeedSpec::new(8, trial, 0),
            );
            let nrm = tensor_norm(&x);
            sum += nrm * nrm;
        }
        let mean = sum / trials as f64;
        assert!((mean - 25.0).abs() < 1.25, "mean {mean}");
    }

    #[test]
    fn inner_unit_basis() {
        let x = t(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(tensor_inner(&x, &x).unwrap(), 1.0);
    }

    #[test]
    fn inner_orthogonal_first_factors() {
        let x = t(&[&[1.0, 0.0], &[1.0, 2.0]]);
        let y = t(&[&[0.0, 1.0], &[1.0, 2.0]]);
        assert_eq!(tensor_inner(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn inner_shape_mismatch() {
        let x = t(&[&[1.0, 0.0]]);
        let y = t(&[&[1.0, 0.0, 0.0]]);
        assert!(tensor_inner(&x, &y).is_err());
    }

    #[test]
    fn running_max_all_sqrt_n_factors() {
        // every prefix is exactly 1
        let x = t(&[&[2.0, 0.0, 0.0, 0.0], &[0.0, 2.0, 0.0, 0.0]]);
        assert_relative_eq!(running_max_statistic(&x), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn running_max_single_mode() {
        let x = t(&[&[3.0, 0.0, 0.0, 0.0]]);
        assert_relative_eq!(running_max_statistic(&x), 1.5, max_relative = 1e-12);
    }

    #[test]
    fn running_max_prefix_evaluation() {
        // norms (2√n, √n/2) with n = 4: prefixes are 2 and 1, max = 2
        let x = t(&[&[4.0, 0.0, 0.0, 0.0], &[1.0, 0.0, 0.0, 0.0]]);
        assert_relative_eq!(running_max_statistic(&x), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn appending_sqrt_n_factor_never_decreases_statistic() {
        // a norm-√n factor reproduces the k=d prefix, which the max already
        // contains, so the statistic can only stay put
        for trial in 0..50 {
            let x = SimpleTensor::sample(
                &DistSpec::standard_normal(),
                4,
                3,
                SeedSpec::new(77, trial, 0),
            );
            let before = running_max_statistic(&x);
            let mut factors = x.factors().to_vec();
            factors.push(vec![2.0, 0.0, 0.0, 0.0]); // norm √n exactly
            let after = running_max_statistic(&SimpleTensor::new(factors).unwrap());
            assert!(after >= before * (1.0 - 1e-12), "{after} < {before}");
            assert_relative_eq!(after, before, max_relative = 1e-9);
        }
    }

    proptest! {
        #[test]
        fn inner_matches_dense_and_norm_squared(seed in 0u64..500, n in 1usize..5, d in 1usize..4) {
            let dist = DistSpec::standard_normal();
            let x = SimpleTensor::sample(&dist, n, d, SeedSpec::new(seed, 0, 0));
            let y = SimpleTensor::sample(&dist, n, d, SeedSpec::new(seed, 1, 0));
            let dx = densify(&x).unwrap();
            let dy = densify(&y).unwrap();
            let dense_inner: f64 = dx.entries.iter().zip(&dy.entries).map(|(a, b)| a * b).sum();
            let fast = tensor_inner(&x, &y).unwrap();
            prop_assert!((fast - dense_inner).abs() <= 1e-12 * dense_inner.abs().max(1.0));
            let nrm = tensor_norm(&x);
            let self_inner = tensor_inner(&x, &x).unwrap();
            prop_assert!((nrm * nrm - self_inner).abs() <= 1e-12 * self_inner.abs().max(1.0));
        }
    }
}
