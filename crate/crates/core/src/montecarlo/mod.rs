//! Reproducible experiment engine. Trials are independent tasks keyed by
//! trial index; aggregation reduces in trial-index order, so a report is a
//! pure function of its config — the worker count only affects wall-clock.

mod condition;
mod martingale;
mod mgf;
mod tail;
mod variance;

pub use condition::{run_condition_experiment, ConditionReport, ConditionTrial};
pub use martingale::{run_martingale_check, MartingaleInstance, MartingaleReport};
pub use mgf::{run_mgf_experiment, MgfPoint, MgfReport, SymmetricMatrixSpec};
pub use tail::{
    distance_subspace_fixture, euclidean_operator_fixture, max_functionals_fixture,
    run_euclidean_conc, run_tail_experiment, ConvexTestFn, TestFunction,
};
pub use variance::{run_variance_experiment, VarianceReport};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rand_sources::DistSpec;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// 95% normal quantile used for every Wilson interval.
pub const WILSON_Z: f64 = 1.959963984540054;

/// Survival estimates outside [10/N, 0.25] are excluded from constant fits:
/// below is noise, above the bound's cap dominates.
pub const FIT_WINDOW_UPPER: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    NormTail,
    Maximal,
    ConvexConc,
    EuclideanConc,
    VarianceScaling,
    Distance,
    Condition,
    MgfChaos,
    MartingaleCheck,
    Multipliers,
}

impl Experiment {
    pub fn slug(&self) -> &'static str {
        match self {
            Experiment::NormTail => "norm-tail",
            Experiment::Maximal => "maximal",
            Experiment::ConvexConc => "convex-conc",
            Experiment::EuclideanConc => "euclidean-conc",
            Experiment::VarianceScaling => "variance",
            Experiment::Distance => "distance",
            Experiment::Condition => "condition",
            Experiment::MgfChaos => "mgf-chaos",
            Experiment::MartingaleCheck => "martingale-check",
            Experiment::Multipliers => "multipliers",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    pub dist: DistSpec,
    pub trials: usize,
    /// t-grid, u-grid, or λ-grid depending on the experiment.
    pub grid: Vec<f64>,
    pub master_seed: u64,
    /// Scheduling only: results are a pure function of everything else, so
    /// the worker count is excluded from serialized payloads.
    #[serde(skip_serializing, default = "default_workers")]
    pub workers: usize,
    /// Which convex test function the convex-conc experiment evaluates.
    #[serde(default)]
    pub test_fn: ConvexTestFn,
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::config("n must be >= 1"));
        }
        if self.d < 1 {
            return Err(Error::config("d must be >= 1"));
        }
        if self.trials < 1 {
            return Err(Error::config("trials must be >= 1"));
        }
        if self.workers < 1 {
            return Err(Error::config("workers must be >= 1"));
        }
        if self.grid.is_empty() {
            return Err(Error::config("grid must be nonempty"));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("grid must be strictly increasing"));
        }
        // only the λ-grid of the chaos MGF experiment may go negative
        if self.experiment != Experiment::MgfChaos && self.grid[0] < 0.0 {
            return Err(Error::config("grid values must be nonnegative"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps > 0.0 && eps <= 1.0) {
                return Err(Error::config(format!(
                    "epsilon must lie in (0, 1], got {eps}"
                )));
            }
        }
        match self.experiment {
            Experiment::VarianceScaling => {
                if self.n < 2 {
                    return Err(Error::config("variance experiment needs n >= 2"));
                }
                if self.trials < 10_000 {
                    return Err(Error::config(
                        "variance experiment needs at least 10^4 trials",
                    ));
                }
            }
            Experiment::Distance => {
                if self.k.is_none() {
                    return Err(Error::config("distance experiment needs a codimension k"));
                }
            }
            Experiment::MgfChaos if self.n > 100 => {
                return Err(Error::config("mgf experiment is limited to n <= 100"));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Everything a report needs to be reproduced: the full config (which carries
/// the master seed) and the build that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub config: ExperimentConfig,
    pub tool_version: String,
}

impl RunMetadata {
    pub fn for_config(config: &ExperimentConfig) -> Self {
        RunMetadata {
            config: config.clone(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailPoint {
    pub threshold: f64,
    pub exceed_count: u64,
    pub survival: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    /// Inside the inequality's stated t-range.
    pub in_range: bool,
    /// Inside the wider range 0 ≤ t ≤ 2n^{d/2}·lip.
    pub in_wide_range: bool,
    pub bound_default_c: f64,
    pub bound_fitted_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantFit {
    pub c_hat: f64,
    pub r_squared: f64,
    pub points_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub metadata: RunMetadata,
    /// The deterministic or pilot-estimated centering the statistic is
    /// measured against.
    pub centering: f64,
    pub points: Vec<TailPoint>,
    pub fitted_c: Option<ConstantFit>,
    pub fit_note: Option<String>,
}

impl TailReport {
    pub fn survival(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.survival).collect()
    }
}

/// Wilson score interval at confidence z for `count` successes out of `n`.
pub fn wilson_interval(count: u64, n: u64, z: f64) -> (f64, f64) {
    debug_assert!(n > 0);
    let nf = n as f64;
    let p = count as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt();
    // the interval contains p mathematically; keep that true under roundoff
    let lo = (center - half).clamp(0.0, 1.0).min(p);
    let hi = (center + half).clamp(0.0, 1.0).max(p);
    (lo, hi)
}

/// Least-squares slope of −log(survival/2) against the exponent shape, over
/// grid points whose survival lies in [10/N, 0.25]. The slope (clamped at 0)
/// is the empirical estimate ĉ of the tail bound's unspecified constant.
pub fn fit_constant(
    shape: &[f64],
    survival: &[f64],
    trials: usize,
) -> (Option<ConstantFit>, Option<String>) {
    debug_assert_eq!(shape.len(), survival.len());
    let lower = 10.0 / trials as f64;
    let pts: Vec<(f64, f64)> = shape
        .iter()
        .zip(survival)
        .filter(|(s, &p)| p >= lower && p <= FIT_WINDOW_UPPER && s.is_finite())
        .map(|(&s, &p)| (s, -(p / 2.0).ln()))
        .collect();
    if pts.len() < 3 {
        return (
            None,
            Some(format!(
                "fit skipped: only {} grid points with survival in [{lower:.3e}, {}]",
                pts.len(),
                FIT_WINDOW_UPPER
            )),
        );
    }
    let n = pts.len() as f64;
    let mean_s = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let ss_s: f64 = pts.iter().map(|p| (p.0 - mean_s).powi(2)).sum();
    let ss_y: f64 = pts.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let cov: f64 = pts.iter().map(|p| (p.0 - mean_s) * (p.1 - mean_y)).sum();
    if ss_s == 0.0 {
        return (
            None,
            Some("fit skipped: exponent shape is constant over usable points".to_string()),
        );
    }
    let slope = cov / ss_s;
    let intercept = mean_y - slope * mean_s;
    let ss_res: f64 = pts
        .iter()
        .map(|p| (p.1 - (slope * p.0 + intercept)).powi(2))
        .sum();
    let r_squared = if ss_y == 0.0 {
        0.0
    } else {
        1.0 - ss_res / ss_y
    };
    (
        Some(ConstantFit {
            c_hat: slope.max(0.0),
            r_squared,
            points_used: pts.len(),
        }),
        None,
    )
}

/// Map trial indices 0..trials through `work` on a pool of the requested
/// size; the collected vector is in trial order, independent of scheduling.
pub(crate) fn run_trials<T, F>(workers: usize, trials: usize, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::numerical(format!("failed to build worker pool: {e}")))?;
    Ok(pool.install(|| (0..trials as u64).into_par_iter().map(work).collect()))
}

/// ln(e^a + e^b) without overflow.
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}
