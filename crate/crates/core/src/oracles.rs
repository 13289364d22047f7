//! Dense reference computations. These materialize n^d coordinates and lean
//! on SVD, so they only run at desk scale — which is the point: they are an
//! independent route against which the Gram-space code is checked, both in
//! tests and by the `oracle-suite` command.

use nalgebra::{DMatrix, DVector};

use crate::bounds::{chaos_mgf_bound, gaussian_chaos_mgf_exact, multipliers, BoundParams};
use crate::error::Result;
use crate::linalg::{
    build_gram, leave_one_out_distance, sigma_min_from_gram, sigma_min_lower_bound_loo,
    SubspaceSpec,
};
use crate::rand_sources::{DistSpec, SeedSpec};
use crate::tensor::{densify, tensor_inner, tensor_norm, SimpleTensor};

/// The n^d × m matrix whose column i is the vectorized tensor Xᵢ.
pub fn dense_khatri_rao(tensors: &[SimpleTensor]) -> Result<DMatrix<f64>> {
    let m = tensors.len();
    let mut columns = Vec::with_capacity(m);
    for t in tensors {
        columns.push(densify(t)?.entries);
    }
    let rows = columns.first().map_or(0, Vec::len);
    Ok(DMatrix::from_fn(rows, m, |i, j| columns[j][i]))
}

/// σ_min of the densified column matrix via full SVD.
pub fn dense_sigma_min(tensors: &[SimpleTensor]) -> Result<f64> {
    let mat = dense_khatri_rao(tensors)?;
    let m = mat.ncols();
    let svals = mat.svd(false, false).singular_values;
    // a wide matrix (m > n^d) is rank deficient: σ_min = 0
    if svals.len() < m {
        return Ok(0.0);
    }
    Ok(svals.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Orthonormal basis of the column space (singular vectors above a relative
/// rank cutoff), robust to rank-deficient inputs.
fn column_space_basis(mat: &DMatrix<f64>) -> DMatrix<f64> {
    if mat.ncols() == 0 {
        return DMatrix::zeros(mat.nrows(), 0);
    }
    let svd = mat.clone().svd(true, false);
    let u = svd.u.expect("u requested");
    let svals = &svd.singular_values;
    let smax = svals.iter().copied().fold(0.0f64, f64::max);
    let keep: Vec<usize> = (0..svals.len())
        .filter(|&i| svals[i] > 1e-10 * smax.max(1e-300))
        .collect();
    let mut basis = DMatrix::zeros(mat.nrows(), keep.len());
    for (c, &i) in keep.iter().enumerate() {
        basis.set_column(c, &u.column(i));
    }
    basis
}

fn dense_distance_to_columns(columns: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    let basis = column_space_basis(columns);
    // residual vector, not norm² subtraction: accurate down to machine zero
    let residual = v - &basis * basis.tr_mul(v);
    residual.norm()
}

/// dist(Xⱼ, span of the other columns), computed densely by orthonormal-basis
/// projection.
pub fn dense_loo_distance(tensors: &[SimpleTensor], j: usize) -> Result<f64> {
    let mat = dense_khatri_rao(tensors)?;
    let others: Vec<usize> = (0..tensors.len()).filter(|&i| i != j).collect();
    let mut reduced = DMatrix::zeros(mat.nrows(), others.len());
    for (c, &i) in others.iter().enumerate() {
        reduced.set_column(c, &mat.column(i));
    }
    let v = DVector::from_column_slice(mat.column(j).as_slice());
    Ok(dense_distance_to_columns(&reduced, &v))
}

/// dist(x, span of the given tensors), computed densely.
pub fn dense_dist_to_span(span: &[SimpleTensor], x: &SimpleTensor) -> Result<f64> {
    let mat = dense_khatri_rao(span)?;
    let v = DVector::from_vec(densify(x)?.entries);
    Ok(dense_distance_to_columns(&mat, &v))
}

#[derive(Debug, Clone)]
pub struct OracleCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> OracleCheck {
    OracleCheck {
        name: name.to_string(),
        pass,
        detail,
    }
}

fn all_dists() -> Vec<DistSpec> {
    vec![
        DistSpec::standard_normal(),
        DistSpec::rademacher(),
        DistSpec::uniform_symmetric(),
        DistSpec::scaled_bernoulli(0.25).expect("valid p"),
    ]
}

/// Cross-checks every fast path against its dense or analytic counterpart.
/// Used by the `oracle-suite` CLI command; any failed verdict is a bug.
pub fn run_oracle_suite(master_seed: u64) -> Vec<OracleCheck> {
    let mut out = Vec::new();
    let dists = all_dists();

    // fixed-layout densification
    let x = SimpleTensor::new(vec![vec![1.0, 2.0], vec![3.0, 4.0]]).expect("shape");
    let dense = densify(&x).expect("small");
    out.push(check(
        "densify-layout",
        dense.entries == vec![3.0, 4.0, 6.0, 8.0],
        format!("{:?}", dense.entries),
    ));

    // product identities vs dense coordinates
    let mut worst = 0.0f64;
    for trial in 0..50u64 {
        let dist = &dists[(trial % 4) as usize];
        let n = 2 + (trial % 3) as usize;
        let d = 1 + (trial % 3) as usize;
        let a = SimpleTensor::sample(dist, n, d, SeedSpec::new(master_seed, trial, 0));
        let b = SimpleTensor::sample(dist, n, d, SeedSpec::new(master_seed, trial, 100));
        let da = DVector::from_vec(densify(&a).expect("small").entries);
        let db = DVector::from_vec(densify(&b).expect("small").entries);
        let inner_err = (tensor_inner(&a, &b).expect("shapes") - da.dot(&db)).abs();
        let norm_err = (tensor_norm(&a) - da.norm()).abs();
        worst = worst.max(inner_err).max(norm_err);
    }
    out.push(check(
        "inner-and-norm-vs-dense",
        worst < 1e-10,
        format!("max abs error {worst:.3e}"),
    ));

    // Gram algebra vs dense SVD / projection distances
    let mut worst_gram = 0.0f64;
    let mut worst_sigma = 0.0f64;
    let mut worst_loo = 0.0f64;
    let mut loo_le_sigma = true;
    for trial in 0..50u64 {
        let dist = &dists[(trial % 4) as usize];
        let n = 2 + (trial % 3) as usize;
        let d = 1 + (trial % 3) as usize;
        let m = 1 + (trial % 6) as usize;
        let cols: Vec<SimpleTensor> = (0..m)
            .map(|i| {
                SimpleTensor::sample(
                    dist,
                    n,
                    d,
                    SeedSpec::new(master_seed ^ 0xA5A5, trial * 16 + i as u64, 0),
                )
            })
            .collect();
        let g = build_gram(&cols).expect("shapes");
        let dense = dense_khatri_rao(&cols).expect("small");
        let dense_gram = dense.tr_mul(&dense);
        for i in 0..m {
            for j in 0..m {
                worst_gram = worst_gram.max((g.hadamard()[(i, j)] - dense_gram[(i, j)]).abs());
            }
        }
        let s_fast = sigma_min_from_gram(&g).expect("eigensolve");
        let s_dense = dense_sigma_min(&cols).expect("small");
        worst_sigma = worst_sigma.max((s_fast * s_fast - s_dense * s_dense).abs());
        for j in 0..m {
            let fast = leave_one_out_distance(&g, j).expect("eigensolve");
            let dq = dense_loo_distance(&cols, j).expect("small");
            worst_loo = worst_loo.max((fast - dq).abs());
        }
        let lo = sigma_min_lower_bound_loo(&g).expect("eigensolve");
        loo_le_sigma &= lo <= s_fast + 1e-8;
    }
    out.push(check(
        "hadamard-gram-vs-dense",
        worst_gram < 1e-10,
        format!("max abs error {worst_gram:.3e}"),
    ));
    out.push(check(
        "lambda-min-vs-dense-sigma-min",
        worst_sigma < 1e-8,
        format!("max |λ_min − σ_min²| = {worst_sigma:.3e}"),
    ));
    out.push(check(
        "leave-one-out-vs-dense",
        worst_loo < 1e-8,
        format!("max abs error {worst_loo:.3e}"),
    ));
    out.push(check(
        "loo-lower-bound-below-sigma-min",
        loo_le_sigma,
        String::new(),
    ));

    // subspace distances, span route vs dense route
    let mut worst_dist = 0.0f64;
    for trial in 0..30u64 {
        let cols: Vec<SimpleTensor> = (0..3)
            .map(|i| {
                SimpleTensor::sample(
                    &DistSpec::standard_normal(),
                    2,
                    2,
                    SeedSpec::new(master_seed ^ 0x5A5A, trial * 8 + i, 0),
                )
            })
            .collect();
        let span = SubspaceSpec::simple_tensor_span(cols[..2].to_vec()).expect("nonempty");
        let fast = span.distance(&cols[2]).expect("shape");
        let dense = dense_dist_to_span(&cols[..2], &cols[2]).expect("small");
        worst_dist = worst_dist.max((fast - dense).abs());
    }
    out.push(check(
        "subspace-distance-vs-dense",
        worst_dist < 1e-8,
        format!("max abs error {worst_dist:.3e}"),
    ));

    // the scalar inequality -ln(1-u) - u <= u² on |u| <= 1/2, and the exact
    // Gaussian chaos MGF dominated by exp(2λ²Σμ²)
    let mut scalar_ok = true;
    let mut u = -0.5f64;
    while u <= 0.5 {
        scalar_ok &= -(1.0 - u).ln() - u <= u * u + 1e-15;
        u += 1e-4;
    }
    out.push(check("scalar-log-inequality", scalar_ok, String::new()));

    let params = BoundParams::new(0.1, 2.0).expect("positive");
    let mut mgf_ok = true;
    for trial in 0..100u64 {
        let mus: Vec<f64> = (0..10)
            .map(|i| ((trial * 53 + i * 97) % 4001) as f64 / 2000.0 - 1.0)
            .collect();
        let max_abs = mus.iter().fold(0.0f64, |a, &m| a.max(m.abs()));
        if max_abs == 0.0 {
            continue;
        }
        let lambda = 0.25 / max_abs;
        let exact = gaussian_chaos_mgf_exact(&mus, lambda).expect("admissible");
        let hs = mus.iter().map(|m| m * m).sum::<f64>().sqrt();
        mgf_ok &= exact <= chaos_mgf_bound(lambda, hs, &params) * (1.0 + 1e-12);
    }
    out.push(check(
        "gaussian-mgf-below-quadratic-bound",
        mgf_ok,
        String::new(),
    ));

    // multiplier recursion conclusions under the hypothesis
    let mut mult_ok = true;
    for trial in 0..1000u64 {
        let d = 1 + (trial % 100) as usize;
        let m = ((trial * 31 % 1000) as f64 + 1.0) / 100.0;
        let frac = ((trial * 17 % 2001) as f64 / 1000.0) - 1.0;
        let lambda0 = frac / (8.0 * d as f64 * m);
        let s = multipliers(lambda0, m, d);
        mult_ok &= s.hypothesis_ok && s.bounds_ok;
    }
    out.push(check("multiplier-recursion", mult_ok, String::new()));

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_suite_is_green() {
        let checks = run_oracle_suite(12345);
        for c in &checks {
            assert!(c.pass, "{}: {}", c.name, c.detail);
        }
        assert!(checks.len() >= 8);
    }
}
