//! Exhaustive verification of the martingale-type product inequality on
//! randomized finite probability spaces.
//!
//! Each coordinate x_k is uniform on a small atom set; f_k(x_k,…,x_d) is a
//! bounded random table; E_k is a random event over (x_{k+1},…,x_d). With
//! π_k the *tightest* constant satisfying E_{x_k} exp(f_k) ≤ π_k over the
//! conditioning atoms allowed by E_{k+1}, exact enumeration must confirm
//! E exp(f₁+⋯+f_d)·1_{E₂∩⋯∩E_d} ≤ π₁⋯π_d.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rand_sources::SeedSpec;

pub const MARTINGALE_ENUM_LIMIT: usize = 1_000_000;
pub const MARTINGALE_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleInstance {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MartingaleReport {
    pub space_sizes: Vec<usize>,
    pub value_bound: f64,
    pub instances: Vec<MartingaleInstance>,
    pub all_hold: bool,
}

/// One concrete finite-space instance: function tables over suffix spaces and
/// events over strictly-later coordinates.
struct MartingaleSpace {
    sizes: Vec<usize>,
    /// suffix_size[k] = ∏_{i≥k} sizes[i−1] for k = 1..=d+1 (1-based).
    suffix_size: Vec<usize>,
    /// f[k−1] is the table of f_k over the suffix space (x_k,…,x_d).
    tables: Vec<Vec<f64>>,
    /// events[k−2] is E_k over the suffix space (x_{k+1},…,x_d), k = 2..=d.
    events: Vec<Vec<bool>>,
}

impl MartingaleSpace {
    fn random(sizes: &[usize], value_bound: f64, seed: SeedSpec) -> Self {
        let d = sizes.len();
        let mut suffix_size = vec![1usize; d + 2];
        for k in (1..=d).rev() {
            suffix_size[k] = sizes[k - 1] * suffix_size[k + 1];
        }
        let mut rng = seed.rng();
        let tables = (1..=d)
            .map(|k| {
                (0..suffix_size[k])
                    .map(|_| (2.0 * rng.random::<f64>() - 1.0) * value_bound)
                    .collect()
            })
            .collect();
        // each conditioning atom joins the event with probability 2/3; empty
        // events are legal and collapse both sides to zero
        let events = (2..=d)
            .map(|k| {
                (0..suffix_size[k + 1])
                    .map(|_| rng.random::<f64>() < 2.0 / 3.0)
                    .collect()
            })
            .collect();
        MartingaleSpace {
            sizes: sizes.to_vec(),
            suffix_size,
            tables,
            events,
        }
    }

    fn d(&self) -> usize {
        self.sizes.len()
    }

    /// Is the conditioning atom u ∈ suffix(k+1) admissible for π_k, i.e. does
    /// it satisfy E_{k+1}?
    fn admissible(&self, k: usize, u: usize) -> bool {
        let d = self.d();
        if k + 1 > d {
            return true; // E_{d+1} is the whole space
        }
        self.events[k + 1 - 2][u % self.suffix_size[k + 2]]
    }

    /// The tightest π_k: max over admissible conditioning atoms of
    /// E_{x_k} exp(f_k); zero when no atom qualifies.
    fn pi(&self, k: usize) -> f64 {
        let d = self.d();
        debug_assert!((1..=d).contains(&k));
        let atoms = self.sizes[k - 1];
        let mut best = 0.0f64;
        for u in 0..self.suffix_size[k + 1] {
            if !self.admissible(k, u) {
                continue;
            }
            let mean = (0..atoms)
                .map(|a| self.tables[k - 1][a * self.suffix_size[k + 1] + u].exp())
                .sum::<f64>()
                / atoms as f64;
            best = best.max(mean);
        }
        best
    }

    fn evaluate(&self) -> MartingaleInstance {
        let d = self.d();
        let total = self.suffix_size[1];
        let mut lhs_sum = 0.0;
        for idx in 0..total {
            let in_event = (2..=d).all(|k| self.events[k - 2][idx % self.suffix_size[k + 1]]);
            if !in_event {
                continue;
            }
            let exponent: f64 = (1..=d)
                .map(|k| self.tables[k - 1][idx % self.suffix_size[k]])
                .sum();
            lhs_sum += exponent.exp();
        }
        let lhs = lhs_sum / total as f64;
        let rhs: f64 = (1..=d).map(|k| self.pi(k)).product();
        MartingaleInstance {
            lhs,
            rhs,
            holds: lhs <= rhs * (1.0 + 1e-9) + 1e-300,
        }
    }
}

/// Run `instances` randomized exhaustive checks; the verdict is their
/// conjunction.
pub fn run_martingale_check(
    space_sizes: &[usize],
    value_bound: f64,
    instances: usize,
    master_seed: u64,
) -> Result<MartingaleReport> {
    let d = space_sizes.len();
    if d == 0 || d > MARTINGALE_MAX_DEGREE {
        return Err(Error::config(format!(
            "martingale check needs 1..={MARTINGALE_MAX_DEGREE} coordinates, got {d}"
        )));
    }
    if space_sizes.contains(&0) {
        return Err(Error::config("every coordinate needs at least one atom"));
    }
    let total: usize = space_sizes.iter().product();
    if total > MARTINGALE_ENUM_LIMIT {
        return Err(Error::config(format!(
            "{total} atoms exceed the enumeration limit {MARTINGALE_ENUM_LIMIT}"
        )));
    }
    if value_bound.is_nan() || value_bound < 0.0 {
        return Err(Error::config("value bound must be nonnegative"));
    }
    if instances == 0 {
        return Err(Error::config("at least one instance required"));
    }
    let results: Vec<MartingaleInstance> = (0..instances as u64)
        .map(|i| {
            MartingaleSpace::random(space_sizes, value_bound, SeedSpec::new(master_seed, i, 0))
                .evaluate()
        })
        .collect();
    let all_hold = results.iter().all(|r| r.holds);
    Ok(MartingaleReport {
        space_sizes: space_sizes.to_vec(),
        value_bound,
        instances: results,
        all_hold,
    })
}
