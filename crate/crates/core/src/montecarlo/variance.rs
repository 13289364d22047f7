//! Variance-scaling experiment: Var(∏‖xᵢ‖₂) measured against d·n^{d−1}.

use serde::{Deserialize, Serialize};

use crate::bounds::variance_prediction;
use crate::error::{Error, Result};
use crate::montecarlo::{run_trials, Experiment, ExperimentConfig, RunMetadata};
use crate::rand_sources::SeedSpec;
use crate::tensor::{tensor_norm, SimpleTensor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub metadata: RunMetadata,
    /// Sample variance (N−1 denominator) of ∏‖xᵢ‖₂.
    pub empirical_var: f64,
    /// empirical_var / (d·n^{d−1}).
    pub ratio: f64,
    /// Jackknife standard error of the sample variance.
    pub stderr: f64,
    pub scale: f64,
}

pub fn run_variance_experiment(config: &ExperimentConfig) -> Result<VarianceReport> {
    config.validate()?;
    if config.experiment != Experiment::VarianceScaling {
        return Err(Error::config(format!(
            "{} is not the variance experiment",
            config.experiment.slug()
        )));
    }
    // the raw norm must be representable: refuse once n^{d/2} > 1e300
    let log_center = 0.5 * config.d as f64 * (config.n as f64).ln();
    if log_center > 300.0 * std::f64::consts::LN_10 {
        return Err(Error::numerical(format!(
            "n^(d/2) = exp({log_center:.1}) exceeds 1e300; the variance of the raw norm \
             is not representable in double precision"
        )));
    }
    let (n, d) = (config.n, config.d);
    let dist = config.dist;
    let seed_base = config.master_seed;
    let values: Vec<f64> = run_trials(config.workers, config.trials, |trial| {
        let x = SimpleTensor::sample(&dist, n, d, SeedSpec::new(seed_base, trial, 0));
        tensor_norm(&x)
    })?;
    let nf = config.trials as f64;
    let s1: f64 = values.iter().sum();
    let s2: f64 = values.iter().map(|v| v * v).sum();
    let var = (s2 - s1 * s1 / nf) / (nf - 1.0);

    // jackknife over leave-one-out variances, each in O(1) from the sums
    let mut loo = Vec::with_capacity(values.len());
    for &v in &values {
        let s1i = s1 - v;
        let s2i = s2 - v * v;
        loo.push((s2i - s1i * s1i / (nf - 1.0)) / (nf - 2.0));
    }
    let loo_mean = loo.iter().sum::<f64>() / nf;
    let stderr = ((nf - 1.0) / nf * loo.iter().map(|v| (v - loo_mean).powi(2)).sum::<f64>()).sqrt();

    let scale = variance_prediction(config.n, config.d);
    Ok(VarianceReport {
        metadata: RunMetadata::for_config(config),
        empirical_var: var,
        ratio: var / scale,
        stderr,
        scale,
    })
}
