//! Result files: JSON payloads, CSV views with identical numeric values, and
//! the run manifest. Floats are written in their shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use tensorconc::bounds::MultiplierSchedule;
use tensorconc::montecarlo::{
    ConditionReport, MartingaleReport, MgfReport, TailReport, VarianceReport, TOOL_VERSION,
};
use tensorconc::oracles::OracleCheck;
use tensorconc::{Error, Result};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config: serde_json::Value,
    pub started_at: String,
    pub finished_at: String,
    pub tool_version: String,
    pub workers: usize,
    pub outputs: Vec<String>,
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .map_err(|e| Error::numerical(format!("cannot create {}: {e}", parent.display())))?;
    }
    fs::write(path, text)
        .map_err(|e| Error::numerical(format!("cannot write {}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::numerical(format!("serialization failed: {e}")))?;
    text.push('\n');
    write_text(path, &text)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn tail_csv(report: &TailReport) -> String {
    let mut out = String::from("t,survival,wilson_lo,wilson_hi,bound_default_c,bound_fitted_c\n");
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            p.threshold,
            p.survival,
            p.wilson_lo,
            p.wilson_hi,
            p.bound_default_c,
            fmt_opt(p.bound_fitted_c)
        );
    }
    out
}

pub fn variance_csv(report: &VarianceReport) -> String {
    let cfg = &report.metadata.config;
    format!(
        "n,d,trials,empirical_var,ratio,stderr,scale\n{},{},{},{},{},{},{}\n",
        cfg.n, cfg.d, cfg.trials, report.empirical_var, report.ratio, report.stderr, report.scale
    )
}

pub fn condition_csv(report: &ConditionReport) -> String {
    let mut out = String::from("trial,sigma_min,loo_lower_bound,threshold,pass\n");
    for (i, t) in report.trials.iter().enumerate() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i, t.sigma_min, t.loo_lower_bound, report.threshold, t.pass
        );
    }
    out
}

pub fn mgf_csv(report: &MgfReport) -> String {
    let mut out = String::from("lambda,empirical,stderr,unreliable,exact,bound,lambda_in_range\n");
    for p in &report.points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.lambda,
            p.empirical,
            p.stderr,
            p.unreliable,
            fmt_opt(p.exact),
            p.bound,
            p.lambda_in_range
        );
    }
    out
}

pub fn martingale_csv(report: &MartingaleReport) -> String {
    let mut out = String::from("instance,lhs,rhs,holds\n");
    for (i, r) in report.instances.iter().enumerate() {
        let _ = writeln!(out, "{},{},{},{}", i, r.lhs, r.rhs, r.holds);
    }
    out
}

pub fn multipliers_csv(schedule: &MultiplierSchedule) -> String {
    let mut out = String::from("k,lambda_k\n");
    for (k, l) in schedule.sequence.iter().enumerate() {
        let _ = writeln!(out, "{k},{l}");
    }
    out
}

pub fn oracle_csv(checks: &[OracleCheck]) -> String {
    let mut out = String::from("name,pass,detail\n");
    for c in checks {
        let _ = writeln!(out, "{},{},{}", c.name, c.pass, c.detail.replace(',', ";"));
    }
    out
}

/// Assembles `<out>/<experiment>-<seed>.<ext>` paths and the manifest.
pub struct RunWriter {
    out_dir: PathBuf,
    stem: String,
    experiment: String,
    config_echo: serde_json::Value,
    workers: usize,
    started_at: String,
    outputs: Vec<PathBuf>,
}

impl RunWriter {
    pub fn new(
        out_dir: &Path,
        experiment: &str,
        seed: u64,
        config_echo: serde_json::Value,
        workers: usize,
    ) -> Self {
        RunWriter {
            out_dir: out_dir.to_path_buf(),
            stem: format!("{experiment}-{seed}"),
            experiment: experiment.to_string(),
            config_echo,
            workers,
            started_at: chrono::Utc::now().to_rfc3339(),
            outputs: Vec::new(),
        }
    }

    pub fn path(&self, ext: &str) -> PathBuf {
        self.out_dir.join(format!("{}.{ext}", self.stem))
    }

    pub fn write_payload<T: Serialize>(&mut self, value: &T) -> Result<PathBuf> {
        let path = self.path("json");
        write_json(&path, value)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn write_csv(&mut self, csv: &str) -> Result<PathBuf> {
        let path = self.path("csv");
        write_text(&path, csv)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    pub fn write_svg(&mut self, svg: &str) -> Result<PathBuf> {
        let path = self.path("svg");
        write_text(&path, svg)?;
        self.outputs.push(path.clone());
        Ok(path)
    }

    /// Writes `<out>/manifest.json`; every listed output exists by now.
    pub fn finish(self) -> Result<Vec<PathBuf>> {
        let manifest = RunManifest {
            experiment: self.experiment,
            config: self.config_echo,
            started_at: self.started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
            tool_version: TOOL_VERSION.to_string(),
            workers: self.workers,
            outputs: self
                .outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
        };
        write_json(&self.out_dir.join("manifest.json"), &manifest)?;
        Ok(self.outputs)
    }
}
