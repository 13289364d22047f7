//! Conditioning experiment: σ_min of m = (1−ε)·n^d random Khatri-Rao columns
//! against the threshold √ε/2, entirely through the Gram route.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{build_gram, sigma_min_from_gram, sigma_min_lower_bound_loo};
use crate::montecarlo::{
    run_trials, wilson_interval, Experiment, ExperimentConfig, RunMetadata, WILSON_Z,
};
use crate::rand_sources::{SeedSpec, PILOT_MODE_OFFSET};
use crate::tensor::{checked_ambient_dim, SimpleTensor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionTrial {
    pub sigma_min: f64,
    pub loo_lower_bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub metadata: RunMetadata,
    pub m: usize,
    /// √ε/2.
    pub threshold: f64,
    pub trials: Vec<ConditionTrial>,
    pub pass_count: u64,
    pub pass_rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
}

/// Column count: an explicit m overrides the ε-derived floor((1−ε)·n^d).
pub fn condition_column_count(config: &ExperimentConfig) -> Result<usize> {
    if let Some(m) = config.m {
        if m == 0 {
            return Err(Error::config("m must be >= 1"));
        }
        return Ok(m);
    }
    let eps = config
        .epsilon
        .ok_or_else(|| Error::config("condition experiment needs epsilon (or an explicit m)"))?;
    let ambient = checked_ambient_dim(config.n, config.d)
        .ok_or_else(|| Error::config("n^d overflows; pass an explicit m"))?;
    let m = ((1.0 - eps) * ambient as f64).floor() as usize;
    if m == 0 {
        return Err(Error::config(format!(
            "floor((1-epsilon)·n^d) = 0 at epsilon = {eps}; pass an explicit m"
        )));
    }
    Ok(m)
}

pub fn run_condition_experiment(config: &ExperimentConfig) -> Result<ConditionReport> {
    config.validate()?;
    if config.experiment != Experiment::Condition {
        return Err(Error::config(format!(
            "{} is not the condition experiment",
            config.experiment.slug()
        )));
    }
    let eps = config
        .epsilon
        .ok_or_else(|| Error::config("condition experiment needs epsilon for the threshold"))?;
    let m = condition_column_count(config)?;
    // column i mode k lives on stream i·d + k; keep clear of the pilot offset
    if m.checked_mul(config.d)
        .is_none_or(|v| v >= PILOT_MODE_OFFSET as usize)
    {
        return Err(Error::config(format!(
            "m·d = {} exceeds the per-trial stream budget",
            m * config.d
        )));
    }
    let threshold = eps.sqrt() / 2.0;
    let (n, d) = (config.n, config.d);
    let dist = config.dist;
    let seed_base = config.master_seed;
    let trials: Vec<Result<ConditionTrial>> = run_trials(config.workers, config.trials, |trial| {
        let columns: Vec<SimpleTensor> = (0..m)
            .map(|i| {
                SimpleTensor::sample(&dist, n, d, SeedSpec::new(seed_base, trial, (i * d) as u32))
            })
            .collect();
        let gram = build_gram(&columns)?;
        let sigma_min = sigma_min_from_gram(&gram)?;
        let loo_lower_bound = sigma_min_lower_bound_loo(&gram)?;
        Ok(ConditionTrial {
            sigma_min,
            loo_lower_bound,
            pass: sigma_min >= threshold,
        })
    })?;
    let trials: Vec<ConditionTrial> = trials.into_iter().collect::<Result<_>>()?;
    let pass_count = trials.iter().filter(|t| t.pass).count() as u64;
    let pass_rate = pass_count as f64 / config.trials as f64;
    let (wilson_lo, wilson_hi) = wilson_interval(pass_count, config.trials as u64, WILSON_Z);
    Ok(ConditionReport {
        metadata: RunMetadata::for_config(config),
        m,
        threshold,
        trials,
        pass_count,
        pass_rate,
        wilson_lo,
        wilson_hi,
    })
}
