//! Seeded, stream-splittable sampling of the coordinate distributions.
//!
//! Every stream is a pure function of `(master_seed, trial_index, mode_index)`,
//! so results are bit-identical regardless of how trials are scheduled across
//! workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Trial indices at the top of the u64 range are reserved for run-level
/// fixtures (operators, subspaces, functional catalogs); trial streams use
/// `0..N` and can never collide with them.
pub const FIXTURE_TRIAL_SUBSPACE: u64 = u64::MAX - 1;
pub const FIXTURE_TRIAL_OPERATOR: u64 = u64::MAX - 2;
pub const FIXTURE_TRIAL_FUNCTIONALS: u64 = u64::MAX - 3;
pub const FIXTURE_TRIAL_MGF_BASIS: u64 = u64::MAX - 4;

/// Pilot runs (used to estimate centerings) shift `mode_index` by 2^31 so the
/// pilot stream is disjoint from the main stream for any d < 2^31.
pub const PILOT_MODE_OFFSET: u32 = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DistKind {
    StandardNormal,
    Rademacher,
    UniformSymmetric,
    /// ±1/√(2p) with probability p each, 0 otherwise; p ∈ (0, 1/2].
    ScaledBernoulliSymmetric,
}

/// A mean-zero, unit-variance, subgaussian coordinate distribution.
///
/// `as_bound` is the a.s. bound K (present for every kind except the normal);
/// `psi2` is the subgaussian-norm parameter, reported but never used to gate
/// computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistSpecRepr", into = "DistSpecRepr")]
pub struct DistSpec {
    kind: DistKind,
    p: Option<f64>,
    as_bound: Option<f64>,
    psi2: f64,
}

const INV_SQRT_LN2: f64 = 1.201_122_408_786_449_8; // 1/sqrt(ln 2)

impl DistSpec {
    pub fn standard_normal() -> Self {
        DistSpec {
            kind: DistKind::StandardNormal,
            p: None,
            as_bound: None,
            psi2: (8.0f64 / 3.0).sqrt(),
        }
    }

    pub fn rademacher() -> Self {
        DistSpec {
            kind: DistKind::Rademacher,
            p: None,
            as_bound: Some(1.0),
            psi2: INV_SQRT_LN2,
        }
    }

    /// Uniform on [−√3, √3].
    pub fn uniform_symmetric() -> Self {
        let bound = 3.0f64.sqrt();
        DistSpec {
            kind: DistKind::UniformSymmetric,
            p: None,
            as_bound: Some(bound),
            psi2: bound * INV_SQRT_LN2,
        }
    }

    pub fn scaled_bernoulli(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 0.5) {
            return Err(Error::config(format!(
                "bernoulli p must lie in (0, 1/2], got {p}"
            )));
        }
        let bound = 1.0 / (2.0 * p).sqrt();
        Ok(DistSpec {
            kind: DistKind::ScaledBernoulliSymmetric,
            p: Some(p),
            as_bound: Some(bound),
            psi2: bound * INV_SQRT_LN2,
        })
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }

    pub fn as_bound(&self) -> Option<f64> {
        self.as_bound
    }

    pub fn psi2(&self) -> f64 {
        self.psi2
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DistKind::StandardNormal => "gaussian",
            DistKind::Rademacher => "rademacher",
            DistKind::UniformSymmetric => "uniform",
            DistKind::ScaledBernoulliSymmetric => "bernoulli",
        }
    }

    /// Parse CLI-style names: `gaussian`, `rademacher`, `uniform`,
    /// `bernoulli:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "normal" => Ok(Self::standard_normal()),
            "rademacher" => Ok(Self::rademacher()),
            "uniform" => Ok(Self::uniform_symmetric()),
            other => {
                if let Some(p) = other.strip_prefix("bernoulli:") {
                    let p: f64 = p
                        .parse()
                        .map_err(|_| Error::config(format!("bad bernoulli parameter {p:?}")))?;
                    Self::scaled_bernoulli(p)
                } else if other == "bernoulli" {
                    Err(Error::config(
                        "bernoulli needs a parameter, e.g. bernoulli:0.25",
                    ))
                } else {
                    Err(Error::config(format!("unknown distribution {other:?}")))
                }
            }
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match self.kind {
            DistKind::StandardNormal => rng.sample(StandardNormal),
            DistKind::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            DistKind::UniformSymmetric => {
                // |2u-1| <= 1 exactly, so the product stays within the bound.
                (2.0 * rng.random::<f64>() - 1.0) * 3.0f64.sqrt()
            }
            DistKind::ScaledBernoulliSymmetric => {
                let p = self.p.expect("bernoulli kind carries p");
                let v = self.as_bound.expect("bernoulli kind is bounded");
                let u = rng.random::<f64>();
                if u < p {
                    v
                } else if u < 2.0 * p {
                    -v
                } else {
                    0.0
                }
            }
        }
    }
}

/// Wire format: `{kind = "rademacher"}` or `{kind = "bernoulli", p = 0.25}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum DistSpecRepr {
    #[serde(alias = "normal", alias = "standard_normal")]
    Gaussian,
    Rademacher,
    Uniform,
    Bernoulli {
        p: f64,
    },
}

impl From<DistSpec> for DistSpecRepr {
    fn from(spec: DistSpec) -> Self {
        match spec.kind {
            DistKind::StandardNormal => DistSpecRepr::Gaussian,
            DistKind::Rademacher => DistSpecRepr::Rademacher,
            DistKind::UniformSymmetric => DistSpecRepr::Uniform,
            DistKind::ScaledBernoulliSymmetric => DistSpecRepr::Bernoulli {
                p: spec.p.expect("bernoulli kind carries p"),
            },
        }
    }
}

impl TryFrom<DistSpecRepr> for DistSpec {
    type Error = Error;

    fn try_from(repr: DistSpecRepr) -> Result<Self> {
        Ok(match repr {
            DistSpecRepr::Gaussian => DistSpec::standard_normal(),
            DistSpecRepr::Rademacher => DistSpec::rademacher(),
            DistSpecRepr::Uniform => DistSpec::uniform_symmetric(),
            DistSpecRepr::Bernoulli { p } => DistSpec::scaled_bernoulli(p)?,
        })
    }
}

/// Address of one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
    pub mode_index: u32,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const MIX_CONST1: u64 = 0xBF58_476D_1CE4_E5B9;
const MIX_CONST2: u64 = 0x94D0_49BB_1331_11EB;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(MIX_CONST1);
    z = (z ^ (z >> 27)).wrapping_mul(MIX_CONST2);
    z ^ (z >> 31)
}

impl SeedSpec {
    pub fn new(master_seed: u64, trial_index: u64, mode_index: u32) -> Self {
        SeedSpec {
            master_seed,
            trial_index,
            mode_index,
        }
    }

    /// The derived generator is a pure function of the triple; the 256-bit
    /// ChaCha key is expanded from a splitmix-style hash so that distinct
    /// triples land on statistically independent streams.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut state = mix64(self.master_seed ^ GOLDEN_GAMMA);
        state = mix64(state ^ self.trial_index.wrapping_mul(GOLDEN_GAMMA));
        state = mix64(state ^ u64::from(self.mode_index).wrapping_mul(MIX_CONST1));
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            state = state.wrapping_add(GOLDEN_GAMMA);
            chunk.copy_from_slice(&mix64(state).to_le_bytes());
        }
        ChaCha12Rng::from_seed(key)
    }

    pub fn with_mode(&self, mode_index: u32) -> Self {
        SeedSpec {
            mode_index,
            ..*self
        }
    }
}

/// n i.i.d. draws from `dist`; deterministic given the seed.
pub fn sample_vector(dist: &DistSpec, n: usize, seed: SeedSpec) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..n).map(|_| dist.draw(&mut rng)).collect()
}

/// d independent vectors; mode k is drawn from the stream at
/// `mode_index = seed.mode_index + k`.
pub fn sample_factors(dist: &DistSpec, n: usize, d: usize, seed: SeedSpec) -> Vec<Vec<f64>> {
    (0..d)
        .map(|k| {
            sample_vector(
                dist,
                n,
                seed.with_mode(seed.mode_index.wrapping_add(k as u32)),
            )
        })
        .collect()
}
