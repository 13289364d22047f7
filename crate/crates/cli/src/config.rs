//! Flat TOML config files mirroring the CLI flags; flags override file values.

use std::path::Path;

use serde::Deserialize;
use tensorconc::{DistSpec, Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum NumberList {
    List(Vec<f64>),
    Csv(String),
}

impl NumberList {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            NumberList::List(v) => Ok(v.clone()),
            NumberList::Csv(s) => parse_f64_list(s),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub epsilon: Option<f64>,
    pub dist: Option<DistSpec>,
    pub trials: Option<usize>,
    pub grid: Option<NumberList>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub plot: Option<bool>,
    pub test_fn: Option<String>,
    pub eigs: Option<NumberList>,
    pub spaces: Option<Vec<usize>>,
    pub value_bound: Option<f64>,
    pub instances: Option<usize>,
    pub lambda0: Option<f64>,
    #[serde(rename = "M")]
    pub big_m: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| Error::config(format!("bad config {}: {e}", path.display())))
    }
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::config(format!("bad number {p:?} in list")))
        })
        .collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::config(format!("bad integer {p:?} in list")))
        })
        .collect()
}
