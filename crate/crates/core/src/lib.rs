//! Simple random tensors X = x₁ ⊗ ⋯ ⊗ x_d held in factor form, the Gram-space
//! linear algebra of their Khatri-Rao column matrices, closed-form tail and
//! MGF bound evaluators, and a seeded Monte Carlo engine that estimates the
//! corresponding empirical quantities and fits the bounds' constants.

pub mod bounds;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod oracles;
pub mod rand_sources;
pub mod tensor;

pub use error::{Error, Result};
pub use linalg::{
    apply_operator, build_gram, dist_to_subspace, leave_one_out_distance, sigma_min_from_gram,
    sigma_min_lower_bound_loo, GramEnsemble, LinearMap, MapRepr, SubspaceSpec,
};
pub use rand_sources::{sample_factors, sample_vector, DistKind, DistSpec, SeedSpec};
pub use tensor::{
    densify, log_tensor_norm, running_max_statistic, tensor_inner, tensor_norm, DenseVector,
    SimpleTensor,
};
