//! Khatri-Rao Gram algebra: smallest singular values, leave-one-out
//! distances, and subspace distances, all computed in m×m space.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rand_sources::{sample_vector, DistSpec, SeedSpec, FIXTURE_TRIAL_SUBSPACE};
use crate::tensor::DENSIFY_LIMIT;
use crate::tensor::{checked_ambient_dim, densify, tensor_inner, tensor_norm, SimpleTensor};

/// Relative rank tolerance for every pseudo-inverse and rank decision,
/// measured against the largest eigenvalue.
pub const RANK_TOL_REL: f64 = 1e-10;

/// Per-mode Gram matrices of m simple tensors and their Hadamard product.
///
/// `hadamard[(i, j)] = ∏ₖ ⟨xₖ⁽ⁱ⁾, xₖ⁽ʲ⁾⟩ = ⟨Xᵢ, Xⱼ⟩`, which is the Gram
/// matrix of the n^d × m Khatri-Rao column matrix.
#[derive(Debug, Clone)]
pub struct GramEnsemble {
    per_mode: Vec<DMatrix<f64>>,
    hadamard: DMatrix<f64>,
    m: usize,
    n: usize,
    d: usize,
}

impl GramEnsemble {
    pub fn per_mode(&self) -> &[DMatrix<f64>] {
        &self.per_mode
    }

    pub fn hadamard(&self) -> &DMatrix<f64> {
        &self.hadamard
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

/// Cost O(d·m²·n): one n×m factor matrix per mode, Gram via Fᵀ F.
pub fn build_gram(tensors: &[SimpleTensor]) -> Result<GramEnsemble> {
    if tensors.is_empty() {
        return Err(Error::config("build_gram needs at least one tensor"));
    }
    let n = tensors[0].n();
    let d = tensors[0].d();
    if tensors.iter().any(|t| !t.same_shape(&tensors[0])) {
        return Err(Error::shape("all columns must share (n, d)"));
    }
    let m = tensors.len();
    let per_mode: Vec<DMatrix<f64>> = (0..d)
        .into_par_iter()
        .map(|k| {
            let f = DMatrix::from_fn(n, m, |i, j| tensors[j].factors()[k][i]);
            f.tr_mul(&f)
        })
        .collect();
    let mut hadamard = DMatrix::repeat(m, m, 1.0);
    for g in &per_mode {
        hadamard.component_mul_assign(g);
    }
    Ok(GramEnsemble {
        per_mode,
        hadamard,
        m,
        n,
        d,
    })
}

/// Symmetric eigendecomposition with a failure path that carries condition
/// diagnostics.
fn sym_eigen(mat: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let m = mat.nrows();
    if m == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    match nalgebra::SymmetricEigen::try_new(mat.clone(), f64::EPSILON, 100_000) {
        Some(eig) => Ok((eig.eigenvalues, eig.eigenvectors)),
        None => {
            let trace = mat.trace();
            let max_abs = mat.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            Err(Error::numerical(format!(
                "symmetric eigensolver did not converge on a {m}x{m} matrix \
                 (trace = {trace:.6e}, max |entry| = {max_abs:.6e})"
            )))
        }
    }
}

/// σ_min of the n^d × m Khatri-Rao column matrix, via √(max(λ_min, 0)) of the
/// Hadamard Gram. Tiny negative eigenvalues are roundoff and clamp to zero.
pub fn sigma_min_from_gram(g: &GramEnsemble) -> Result<f64> {
    let (eigvals, _) = sym_eigen(&g.hadamard)?;
    let lambda_min = eigvals.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(lambda_min.max(0.0).sqrt())
}

/// rhsᵀ G⁺ rhs evaluated through an eigendecomposition, dropping eigenvalues
/// below `RANK_TOL_REL`·λ_max.
struct PinvQuadratic {
    quad: f64,
    lambda_max: f64,
    /// ‖G⁺ rhs‖² — the squared norm of the projection coefficients, which
    /// sets the roundoff scale of the residual ‖x‖² − quad.
    coeff_norm_sq: f64,
}

fn pinv_quadratic_from_eigen(
    eigvals: &DVector<f64>,
    eigvecs: &DMatrix<f64>,
    rhs: &DVector<f64>,
    lambda_max: f64,
) -> PinvQuadratic {
    let mut quad = 0.0;
    let mut coeff_norm_sq = 0.0;
    if lambda_max > 0.0 {
        let tol = RANK_TOL_REL * lambda_max;
        for (i, &lambda) in eigvals.iter().enumerate() {
            if lambda > tol {
                let proj = eigvecs.column(i).dot(rhs);
                quad += proj * proj / lambda;
                coeff_norm_sq += (proj / lambda) * (proj / lambda);
            }
        }
    }
    PinvQuadratic {
        quad,
        lambda_max,
        coeff_norm_sq,
    }
}

fn psd_pinv_quadratic(mat: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<PinvQuadratic> {
    if mat.nrows() == 0 {
        return Ok(PinvQuadratic {
            quad: 0.0,
            lambda_max: 0.0,
            coeff_norm_sq: 0.0,
        });
    }
    let (eigvals, eigvecs) = sym_eigen(mat)?;
    let lambda_max = eigvals.iter().copied().fold(0.0f64, f64::max);
    Ok(pinv_quadratic_from_eigen(
        &eigvals, &eigvecs, rhs, lambda_max,
    ))
}

/// Residuals ‖x‖² − quad below this are roundoff, not signal: the subtraction
/// happens at the scale of the Gram entries, amplified by the projection
/// coefficients. Distances whose square sits under the floor report as zero.
fn residual_floor(norm_sq: f64, q: &PinvQuadratic) -> f64 {
    f64::EPSILON * (norm_sq.abs() + q.quad.abs() + 16.0 * q.lambda_max * q.coeff_norm_sq)
}

fn psd_rank(mat: &DMatrix<f64>) -> Result<usize> {
    if mat.nrows() == 0 {
        return Ok(0);
    }
    let (eigvals, _) = sym_eigen(mat)?;
    let lambda_max = eigvals.iter().copied().fold(0.0f64, f64::max);
    if lambda_max <= 0.0 {
        return Ok(0);
    }
    let tol = RANK_TOL_REL * lambda_max;
    Ok(eigvals.iter().filter(|&&l| l > tol).count())
}

/// dist(Xⱼ, span of the other m−1 columns) = √(‖Xⱼ‖² − gⱼᵀ G₋ⱼ⁺ gⱼ),
/// clamped at zero.
pub fn leave_one_out_distance(g: &GramEnsemble, j: usize) -> Result<f64> {
    if j >= g.m {
        return Err(Error::config(format!(
            "column index {j} out of range for m = {}",
            g.m
        )));
    }
    let norm_sq = g.hadamard[(j, j)];
    if g.m == 1 {
        return Ok(norm_sq.max(0.0).sqrt());
    }
    let reduced = g.hadamard.clone().remove_row(j).remove_column(j);
    let rhs = DVector::from_iterator(
        g.m - 1,
        (0..g.m).filter(|&i| i != j).map(|i| g.hadamard[(i, j)]),
    );
    let q = psd_pinv_quadratic(&reduced, &rhs)?;
    let residual = norm_sq - q.quad;
    if residual <= residual_floor(norm_sq, &q) {
        return Ok(0.0);
    }
    Ok(residual.sqrt())
}

/// (1/√m)·minⱼ dist(Xⱼ, span of the others) — a lower bound on σ_min.
pub fn sigma_min_lower_bound_loo(g: &GramEnsemble) -> Result<f64> {
    let mut min_dist = f64::INFINITY;
    for j in 0..g.m {
        min_dist = min_dist.min(leave_one_out_distance(g, j)?);
    }
    Ok(min_dist / (g.m as f64).sqrt())
}

/// A linear subspace L of R^{n^d}, materialized either as a dense orthonormal
/// basis or as the span of simple tensors handled entirely in Gram space.
#[derive(Debug, Clone)]
pub struct SubspaceSpec {
    n: usize,
    d: usize,
    codim: f64,
    basis: SubspaceBasis,
}

#[derive(Debug, Clone)]
enum SubspaceBasis {
    Dense {
        q: DMatrix<f64>,
    },
    SpanGram {
        tensors: Vec<SimpleTensor>,
        eigvals: DVector<f64>,
        eigvecs: DMatrix<f64>,
        lambda_max: f64,
    },
}

impl SubspaceSpec {
    /// Span of (n^d − codim) i.i.d. Gaussian vectors, orthonormalized densely.
    /// Requires n^d within the dense limit.
    pub fn random_gaussian_span(
        n: usize,
        d: usize,
        codim: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let dim_total = checked_ambient_dim(n, d)
            .filter(|&v| v <= u128::from(DENSIFY_LIMIT))
            .ok_or(Error::SizeLimit {
                requested: checked_ambient_dim(n, d).unwrap_or(u128::MAX),
                limit: DENSIFY_LIMIT,
            })? as usize;
        if codim > dim_total {
            return Err(Error::config(format!(
                "codim {codim} exceeds ambient dimension {dim_total}"
            )));
        }
        let dim = dim_total - codim;
        let q = if dim == 0 {
            DMatrix::zeros(dim_total, 0)
        } else {
            let seed = SeedSpec::new(master_seed, FIXTURE_TRIAL_SUBSPACE, 0);
            let entries = sample_vector(&DistSpec::standard_normal(), dim_total * dim, seed);
            let g = DMatrix::from_column_slice(dim_total, dim, &entries);
            g.qr().q()
        };
        Ok(SubspaceSpec {
            n,
            d,
            codim: codim as f64,
            basis: SubspaceBasis::Dense { q },
        })
    }

    /// Span of the given simple tensors; scales to any n^d because distances
    /// are computed through the span's Hadamard Gram.
    pub fn simple_tensor_span(tensors: Vec<SimpleTensor>) -> Result<Self> {
        if tensors.is_empty() {
            return Err(Error::config(
                "simple_tensor_span needs at least one tensor (use a random span of codim n^d for the zero space)",
            ));
        }
        let n = tensors[0].n();
        let d = tensors[0].d();
        let gram = build_gram(&tensors)?;
        let rank = psd_rank(&gram.hadamard)?;
        let (eigvals, eigvecs) = sym_eigen(&gram.hadamard)?;
        let lambda_max = eigvals.iter().copied().fold(0.0f64, f64::max);
        let ambient = (n as f64).powi(d as i32);
        Ok(SubspaceSpec {
            n,
            d,
            codim: ambient - rank as f64,
            basis: SubspaceBasis::SpanGram {
                tensors,
                eigvals,
                eigvecs,
                lambda_max,
            },
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn codim(&self) -> f64 {
        self.codim
    }

    /// Euclidean distance from x to the subspace.
    pub fn distance(&self, x: &SimpleTensor) -> Result<f64> {
        if x.n() != self.n || x.d() != self.d {
            return Err(Error::shape(format!(
                "tensor shape (n={}, d={}) does not match subspace shape (n={}, d={})",
                x.n(),
                x.d(),
                self.n,
                self.d
            )));
        }
        match &self.basis {
            SubspaceBasis::Dense { q } => {
                let dense = densify(x)?;
                let v = DVector::from_vec(dense.entries);
                let residual = &v - q * q.tr_mul(&v);
                Ok(residual.norm())
            }
            SubspaceBasis::SpanGram {
                tensors,
                eigvals,
                eigvecs,
                lambda_max,
            } => {
                let cross = DVector::from_vec(
                    tensors
                        .iter()
                        .map(|t| tensor_inner(t, x))
                        .collect::<Result<Vec<_>>>()?,
                );
                let q = pinv_quadratic_from_eigen(eigvals, eigvecs, &cross, *lambda_max);
                let norm = tensor_norm(x);
                let residual = norm * norm - q.quad;
                if residual <= residual_floor(norm * norm, &q) {
                    return Ok(0.0);
                }
                Ok(residual.sqrt())
            }
        }
    }
}

/// Euclidean distance from a simple tensor to a subspace.
pub fn dist_to_subspace(x: &SimpleTensor, l: &SubspaceSpec) -> Result<f64> {
    l.distance(x)
}

/// The operator A of the Euclidean concentration experiments, with its
/// Hilbert-Schmidt and operator norms.
#[derive(Debug, Clone)]
pub struct LinearMap {
    repr: MapRepr,
    hs_norm: f64,
    op_norm: f64,
}

#[derive(Debug, Clone)]
pub enum MapRepr {
    /// Any matrix with n^d columns; applied to the densified tensor.
    Dense(DMatrix<f64>),
    /// Orthogonal projection onto L⊥: op norm 1, HS norm √codim(L), and
    /// ‖PX‖ = dist(X, L) computed through the structured subspace path.
    ProjectionComplement(SubspaceSpec),
}

impl LinearMap {
    pub fn dense(mat: DMatrix<f64>) -> Self {
        let hs_norm = mat.norm();
        let op_norm = if mat.nrows() == 0 || mat.ncols() == 0 {
            0.0
        } else {
            mat.clone().svd(false, false).singular_values.max()
        };
        LinearMap {
            repr: MapRepr::Dense(mat),
            hs_norm,
            op_norm,
        }
    }

    pub fn projection_complement(l: SubspaceSpec) -> Self {
        let codim = l.codim();
        LinearMap {
            hs_norm: codim.sqrt(),
            op_norm: if codim > 0.0 { 1.0 } else { 0.0 },
            repr: MapRepr::ProjectionComplement(l),
        }
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm
    }

    pub fn op_norm(&self) -> f64 {
        self.op_norm
    }

    pub fn repr(&self) -> &MapRepr {
        &self.repr
    }
}

/// ‖AX‖ for a simple tensor X.
pub fn apply_operator(a: &LinearMap, x: &SimpleTensor) -> Result<f64> {
    match &a.repr {
        MapRepr::Dense(mat) => {
            let dense = densify(x)?;
            if mat.ncols() != dense.entries.len() {
                return Err(Error::shape(format!(
                    "operator expects input dimension {}, tensor has n^d = {}",
                    mat.ncols(),
                    dense.entries.len()
                )));
            }
            let v = DVector::from_vec(dense.entries);
            Ok((mat * v).norm())
        }
        MapRepr::ProjectionComplement(l) => l.distance(x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles;
    use crate::rand_sources::{DistSpec, SeedSpec};
    use approx::assert_relative_eq;

    fn random_columns(seed: u64, n: usize, d: usize, m: usize) -> Vec<SimpleTensor> {
        (0..m)
            .map(|i| {
                SimpleTensor::sample(
                    &DistSpec::standard_normal(),
                    n,
                    d,
                    SeedSpec::new(seed, i as u64, 0),
                )
            })
            .collect()
    }

    fn basis_tensor(n: usize, i: usize, j: usize) -> SimpleTensor {
        let mut a = vec![0.0; n];
        let mut b = vec![0.0; n];
        a[i] = 1.0;
        b[j] = 1.0;
        SimpleTensor::new(vec![a, b]).unwrap()
    }

    #[test]
    fn gram_single_column_is_norm_squared() {
        let cols = random_columns(1, 3, 2, 1);
        let g = build_gram(&cols).unwrap();
        let nrm = tensor_norm(&cols[0]);
        assert_relative_eq!(g.hadamard()[(0, 0)], nrm * nrm, max_relative = 1e-12);
    }

    #[test]
    fn gram_matches_dense_oracle() {
        let cols = random_columns(2, 2, 2, 3);
        let g = build_gram(&cols).unwrap();
        let dense = oracles::dense_khatri_rao(&cols).unwrap();
        let dense_gram = dense.tr_mul(&dense);
        for i in 0..3 {
            for j in 0..3 {
                assert!(
                    (g.hadamard()[(i, j)] - dense_gram[(i, j)]).abs() < 1e-10,
                    "entry ({i},{j})"
                );
            }
        }
        // hadamard is the entrywise product of the per-mode Grams
        for i in 0..3 {
            for j in 0..3 {
                let prod: f64 = g.per_mode().iter().map(|pm| pm[(i, j)]).product();
                assert_relative_eq!(g.hadamard()[(i, j)], prod, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn duplicated_column_makes_gram_singular() {
        let mut cols = random_columns(3, 2, 2, 2);
        cols.push(cols[0].clone());
        let g = build_gram(&cols).unwrap();
        let (eigvals, _) = sym_eigen(g.hadamard()).unwrap();
        let lambda_min = eigvals.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(lambda_min <= 1e-10 * g.hadamard().trace());
    }

    #[test]
    fn gram_shape_mismatch() {
        let a = SimpleTensor::new(vec![vec![1.0, 0.0]]).unwrap();
        let b = SimpleTensor::new(vec![vec![1.0, 0.0, 0.0]]).unwrap();
        assert!(build_gram(&[a, b]).is_err());
    }

    #[test]
    fn sigma_min_orthonormal_columns() {
        let cols = vec![
            basis_tensor(2, 0, 0),
            basis_tensor(2, 0, 1),
            basis_tensor(2, 1, 0),
        ];
        let g = build_gram(&cols).unwrap();
        assert_relative_eq!(sigma_min_from_gram(&g).unwrap(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn sigma_min_matches_dense_svd() {
        for seed in 0..20 {
            let cols = random_columns(100 + seed, 2, 2, 3);
            let g = build_gram(&cols).unwrap();
            let fast = sigma_min_from_gram(&g).unwrap();
            let dense = oracles::dense_sigma_min(&cols).unwrap();
            assert!(
                (fast - dense).abs() < 1e-8,
                "seed {seed}: {fast} vs {dense}"
            );
        }
    }

    #[test]
    fn sigma_min_forced_rank_deficiency() {
        let cols = random_columns(9, 2, 2, 6); // m = 6 > n^d = 4
        let g = build_gram(&cols).unwrap();
        assert!(sigma_min_from_gram(&g).unwrap() < 1e-8);
    }

    #[test]
    fn sigma_min_monotone_in_columns() {
        let cols = random_columns(11, 3, 2, 5);
        let mut prev = f64::INFINITY;
        for m in 1..=5 {
            let g = build_gram(&cols[..m]).unwrap();
            let s = sigma_min_from_gram(&g).unwrap();
            assert!(s <= prev + 1e-10, "m={m}: {s} > {prev}");
            prev = s;
        }
    }

    #[test]
    fn loo_orthogonal_pair() {
        let cols = vec![basis_tensor(2, 0, 0), basis_tensor(2, 1, 1)];
        let g = build_gram(&cols).unwrap();
        assert_relative_eq!(
            leave_one_out_distance(&g, 0).unwrap(),
            1.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn loo_contained_in_span() {
        let x = random_columns(5, 2, 2, 1).pop().unwrap();
        let doubled = SimpleTensor::new(
            x.factors()
                .iter()
                .map(|f| f.iter().map(|v| 2.0 * v).collect())
                .collect(),
        )
        .unwrap();
        let g = build_gram(&[x, doubled]).unwrap();
        assert!(leave_one_out_distance(&g, 1).unwrap() < 1e-8);
    }

    #[test]
    fn loo_matches_dense_oracle() {
        for seed in 0..20 {
            let cols = random_columns(200 + seed, 2, 2, 3);
            let g = build_gram(&cols).unwrap();
            for j in 0..3 {
                let fast = leave_one_out_distance(&g, j).unwrap();
                let dense = oracles::dense_loo_distance(&cols, j).unwrap();
                assert!(
                    (fast - dense).abs() < 1e-8,
                    "seed {seed} col {j}: {fast} vs {dense}"
                );
            }
        }
    }

    #[test]
    fn loo_invariant_under_rescaling_other_columns() {
        let cols = random_columns(31, 3, 2, 4);
        let g = build_gram(&cols).unwrap();
        let base = leave_one_out_distance(&g, 2).unwrap();
        let mut scaled = cols.clone();
        scaled[0] = SimpleTensor::new(
            scaled[0]
                .factors()
                .iter()
                .map(|f| f.iter().map(|v| -3.5 * v).collect())
                .collect(),
        )
        .unwrap();
        let g2 = build_gram(&scaled).unwrap();
        let after = leave_one_out_distance(&g2, 2).unwrap();
        assert_relative_eq!(base, after, max_relative = 1e-8);
    }

    #[test]
    fn loo_bound_examples() {
        let cols = vec![
            basis_tensor(2, 0, 0),
            basis_tensor(2, 0, 1),
            basis_tensor(2, 1, 0),
            basis_tensor(2, 1, 1),
        ];
        let g = build_gram(&cols).unwrap();
        assert_relative_eq!(
            sigma_min_lower_bound_loo(&g).unwrap(),
            0.5,
            max_relative = 1e-12
        );

        let mut dup = cols.clone();
        dup[3] = dup[0].clone();
        let g = build_gram(&dup).unwrap();
        assert!(sigma_min_lower_bound_loo(&g).unwrap() < 1e-8);
    }

    #[test]
    fn loo_bound_is_a_lower_bound() {
        for seed in 0..30 {
            let cols = random_columns(300 + seed, 3, 2, 4);
            let g = build_gram(&cols).unwrap();
            let lo = sigma_min_lower_bound_loo(&g).unwrap();
            let s = sigma_min_from_gram(&g).unwrap();
            assert!(lo <= s + 1e-8, "seed {seed}: {lo} > {s}");
        }
    }

    #[test]
    fn dist_full_space_and_zero_space() {
        let x = random_columns(7, 2, 2, 1).pop().unwrap();
        let full = SubspaceSpec::random_gaussian_span(2, 2, 0, 1).unwrap();
        assert!(dist_to_subspace(&x, &full).unwrap() < 1e-8);
        let zero = SubspaceSpec::random_gaussian_span(2, 2, 4, 1).unwrap();
        assert_relative_eq!(
            dist_to_subspace(&x, &zero).unwrap(),
            tensor_norm(&x),
            max_relative = 1e-12
        );
    }

    #[test]
    fn dist_span_matches_dense_oracle() {
        for seed in 0..20 {
            let cols = random_columns(400 + seed, 2, 2, 3);
            let span = SubspaceSpec::simple_tensor_span(cols[..2].to_vec()).unwrap();
            let fast = dist_to_subspace(&cols[2], &span).unwrap();
            let dense = oracles::dense_dist_to_span(&cols[..2], &cols[2]).unwrap();
            assert!(
                (fast - dense).abs() < 1e-8,
                "seed {seed}: {fast} vs {dense}"
            );
        }
    }

    #[test]
    fn span_codim_counts_numerical_rank() {
        let mut cols = random_columns(17, 2, 2, 2);
        cols.push(cols[0].clone()); // duplicate adds nothing to the span
        let span = SubspaceSpec::simple_tensor_span(cols).unwrap();
        assert_eq!(span.codim(), 2.0); // 4 - rank 2
    }

    #[test]
    fn apply_identity_is_tensor_norm() {
        let x = random_columns(21, 2, 2, 1).pop().unwrap();
        let a = LinearMap::dense(DMatrix::identity(4, 4));
        assert_relative_eq!(
            apply_operator(&a, &x).unwrap(),
            tensor_norm(&x),
            max_relative = 1e-12
        );
    }

    #[test]
    fn apply_rank_one_projection() {
        let x = random_columns(22, 2, 2, 1).pop().unwrap();
        let u = basis_tensor(2, 1, 0);
        let du = densify(&u).unwrap();
        let uvec = DVector::from_vec(du.entries);
        let proj = &uvec * uvec.transpose();
        let a = LinearMap::dense(proj);
        assert_relative_eq!(
            apply_operator(&a, &x).unwrap(),
            tensor_inner(&u, &x).unwrap().abs(),
            max_relative = 1e-10
        );
    }

    #[test]
    fn apply_zero_map() {
        let x = random_columns(23, 2, 2, 1).pop().unwrap();
        let a = LinearMap::dense(DMatrix::zeros(4, 4));
        assert_eq!(apply_operator(&a, &x).unwrap(), 0.0);
    }

    #[test]
    fn apply_dimension_mismatch() {
        let x = random_columns(24, 3, 2, 1).pop().unwrap();
        let a = LinearMap::dense(DMatrix::identity(4, 4));
        assert!(apply_operator(&a, &x).is_err());
    }

    #[test]
    fn projection_complement_norms() {
        let l = SubspaceSpec::random_gaussian_span(2, 2, 3, 5).unwrap();
        let p = LinearMap::projection_complement(l);
        assert_eq!(p.op_norm(), 1.0);
        assert_relative_eq!(p.hs_norm(), 3.0f64.sqrt(), max_relative = 1e-12);
        assert!(p.op_norm() <= p.hs_norm());
    }

    #[test]
    fn projection_complement_applies_as_distance() {
        let x = random_columns(26, 2, 2, 1).pop().unwrap();
        let l = SubspaceSpec::random_gaussian_span(2, 2, 2, 5).unwrap();
        let expected = l.distance(&x).unwrap();
        let p = LinearMap::projection_complement(l);
        assert_relative_eq!(
            apply_operator(&p, &x).unwrap(),
            expected,
            max_relative = 1e-12
        );
    }
}
