//! Experiment runner CLI: every subcommand writes machine-readable results
//! plus a manifest under --out, reproducibly keyed by --seed.
//!
//! Exit codes: 0 success, 1 failed verdicts (multipliers / martingale-check /
//! oracle-suite), 2 configuration errors, 3 numerical failures.

mod config;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tensorconc::bounds::{multipliers, variance_prediction};
use tensorconc::montecarlo::{
    run_condition_experiment, run_martingale_check, run_mgf_experiment, run_tail_experiment,
    run_variance_experiment, ConvexTestFn, Experiment, ExperimentConfig, SymmetricMatrixSpec,
    TailReport,
};
use tensorconc::oracles::run_oracle_suite;
use tensorconc::{DistSpec, Error, Result};

use config::{parse_f64_list, parse_usize_list, FileConfig};
use output::RunWriter;

#[derive(Parser)]
#[command(
    name = "tensorconc",
    version,
    about = "Seeded Monte Carlo experiments on simple random tensors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
struct CommonOpts {
    /// Factor dimension n
    #[arg(long)]
    n: Option<usize>,
    /// Tensor degree d
    #[arg(long)]
    d: Option<usize>,
    /// Column count (condition experiment; overrides the ε-derived value)
    #[arg(long)]
    m: Option<usize>,
    /// Subspace codimension (distance experiment)
    #[arg(long)]
    k: Option<usize>,
    /// ε of the conditioning experiment
    #[arg(long)]
    epsilon: Option<f64>,
    /// Coordinate distribution: gaussian | rademacher | uniform | bernoulli:<p>
    #[arg(long)]
    dist: Option<String>,
    /// Monte Carlo trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated grid (t, u, or λ values depending on the experiment)
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Master seed; identical seeds reproduce byte-identical payloads
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (wall-clock only; results do not depend on it)
    #[arg(long)]
    workers: Option<usize>,
    /// TOML config file mirroring these flags; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
    /// Results format: json (default) additionally emits csv when `csv`
    #[arg(long)]
    format: Option<String>,
    /// Emit an SVG of empirical survival vs the bound curves
    #[arg(long)]
    plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Tail of the norm product ∏‖xᵢ‖₂ above n^{d/2} + t
    NormTail(CommonOpts),
    /// Tail of the running max of normalized prefix products above 1 + u
    Maximal(CommonOpts),
    /// Two-sided tail of a convex 1-Lipschitz statistic around its mean
    ConvexConc {
        #[command(flatten)]
        common: CommonOpts,
        /// Test function: norm | max-functionals
        #[arg(long = "test-fn")]
        test_fn: Option<String>,
    },
    /// Two-sided tail of ‖AX‖ around ‖A‖_HS for a seeded dense operator
    EuclideanConc(CommonOpts),
    /// Var(∏‖xᵢ‖₂) against the scale d·n^{d−1}
    Variance(CommonOpts),
    /// Two-sided tail of dist(X, L) around √k for a random subspace L
    Distance(CommonOpts),
    /// σ_min of m random Khatri-Rao columns against √ε/2
    Condition(CommonOpts),
    /// Empirical MGF of the quadratic form xᵀMx − tr M with exact oracle
    MgfChaos {
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated eigenvalues of M (default: n draws uniform in [−1,1])
        #[arg(long, allow_hyphen_values = true)]
        eigs: Option<String>,
    },
    /// Exhaustive product-inequality check on random finite spaces
    MartingaleCheck {
        #[command(flatten)]
        common: CommonOpts,
        /// Comma-separated atom counts per coordinate (default 3,3,3)
        #[arg(long)]
        spaces: Option<String>,
        /// Bound on |f_k| (default 2)
        #[arg(long = "value-bound")]
        value_bound: Option<f64>,
        /// Number of random instances (default 100)
        #[arg(long)]
        instances: Option<usize>,
    },
    /// The multiplier recursion λ_k = λ_{k−1} + M·λ_{k−1}² and its verdicts
    Multipliers {
        #[command(flatten)]
        common: CommonOpts,
        /// Growth coefficient M
        #[arg(long = "M")]
        big_m: Option<f64>,
        /// Starting value λ₀
        #[arg(long, allow_negative_numbers = true)]
        lambda0: Option<f64>,
    },
    /// Cross-check every fast path against its dense or analytic oracle
    OracleSuite(CommonOpts),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Config(_) | Error::ShapeMismatch(_) | Error::SizeLimit { .. } => {
                    ExitCode::from(2)
                }
                Error::Numerical(_) | Error::DivergentMgf { .. } => ExitCode::from(3),
            }
        }
    }
}

/// Everything resolved: flag > config file > default.
struct Resolved {
    file: FileConfig,
    opts: CommonOpts,
}

impl Resolved {
    fn new(opts: &CommonOpts) -> Result<Self> {
        let file = match &opts.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(Resolved {
            file,
            opts: opts.clone(),
        })
    }

    fn seed(&self) -> u64 {
        self.opts.seed.or(self.file.seed).unwrap_or(0)
    }

    fn out_dir(&self) -> PathBuf {
        self.opts
            .out
            .clone()
            .or_else(|| self.file.out.as_ref().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("runs"))
    }

    fn workers(&self) -> usize {
        self.opts
            .workers
            .or(self.file.workers)
            .unwrap_or_else(|| {
                std::thread::available_parallelism()
                    .map(|n| n.get())
                    .unwrap_or(1)
            })
            .max(1)
    }

    fn emit_csv(&self) -> Result<bool> {
        let fmt = self
            .opts
            .format
            .clone()
            .or_else(|| self.file.format.clone())
            .unwrap_or_else(|| "json".to_string());
        match fmt.as_str() {
            "json" => Ok(false),
            "csv" => Ok(true),
            other => Err(Error::config(format!(
                "unknown format {other:?}; expected json or csv"
            ))),
        }
    }

    fn plot(&self) -> bool {
        self.opts.plot || self.file.plot.unwrap_or(false)
    }

    fn dist(&self) -> Result<DistSpec> {
        match &self.opts.dist {
            Some(s) => DistSpec::parse(s),
            None => Ok(self.file.dist.unwrap_or_else(DistSpec::standard_normal)),
        }
    }

    fn grid(&self) -> Result<Option<Vec<f64>>> {
        if let Some(s) = &self.opts.grid {
            return Ok(Some(parse_f64_list(s)?));
        }
        match &self.file.grid {
            Some(list) => Ok(Some(list.values()?)),
            None => Ok(None),
        }
    }

    fn experiment_config(&self, experiment: Experiment) -> Result<ExperimentConfig> {
        // the default must respect the dense-operator cap n^d <= 1024
        let default_n = if experiment == Experiment::EuclideanConc {
            16
        } else {
            50
        };
        let n = self.opts.n.or(self.file.n).unwrap_or(default_n);
        let d = self.opts.d.or(self.file.d).unwrap_or(2);
        let grid = match self.grid()? {
            Some(g) => g,
            None => default_grid(experiment, n, d),
        };
        Ok(ExperimentConfig {
            experiment,
            n,
            d,
            m: self.opts.m.or(self.file.m),
            k: self.opts.k.or(self.file.k),
            epsilon: self.opts.epsilon.or(self.file.epsilon).or_else(|| {
                if experiment == Experiment::Condition {
                    Some(0.5)
                } else {
                    None
                }
            }),
            dist: self.dist()?,
            trials: self.opts.trials.or(self.file.trials).unwrap_or(10_000),
            grid,
            master_seed: self.seed(),
            workers: self.workers(),
            test_fn: ConvexTestFn::default(),
        })
    }
}

fn default_grid(experiment: Experiment, n: usize, d: usize) -> Vec<f64> {
    match experiment {
        Experiment::Maximal => vec![0.25, 0.5, 0.75, 1.0],
        Experiment::MgfChaos => vec![-0.1, -0.05, 0.05, 0.1],
        // grid is not consumed by these runners
        Experiment::VarianceScaling
        | Experiment::Condition
        | Experiment::MartingaleCheck
        | Experiment::Multipliers => vec![0.0, 1.0],
        // t-experiments fluctuate on the scale sqrt(d·n^{d−1})
        _ => {
            let scale = variance_prediction(n.max(2), d).sqrt();
            if scale.is_finite() {
                [0.5, 1.0, 1.5, 2.0].iter().map(|f| f * scale).collect()
            } else {
                vec![0.5, 1.0, 1.5, 2.0]
            }
        }
    }
}

fn parse_test_fn(s: &str) -> Result<ConvexTestFn> {
    match s {
        "norm" => Ok(ConvexTestFn::Norm),
        "max-functionals" => Ok(ConvexTestFn::MaxFunctionals),
        other => Err(Error::config(format!(
            "unknown test function {other:?}; expected norm or max-functionals"
        ))),
    }
}

fn config_echo(cfg: &ExperimentConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn print_tail_summary(report: &TailReport) {
    println!("  t          survival     wilson95              bound(c0)    in-range");
    for p in &report.points {
        println!(
            "  {:<10.4} {:<12.6} [{:.6}, {:.6}]  {:<12.6} {}",
            p.threshold, p.survival, p.wilson_lo, p.wilson_hi, p.bound_default_c, p.in_range
        );
    }
    match (&report.fitted_c, &report.fit_note) {
        (Some(fit), _) => println!(
            "  fitted c = {:.5} (R² = {:.4}, {} points)",
            fit.c_hat, fit.r_squared, fit.points_used
        ),
        (None, Some(note)) => println!("  {note}"),
        _ => {}
    }
}

fn run_tail_command(
    experiment: Experiment,
    common: &CommonOpts,
    test_fn: Option<&str>,
) -> Result<ExitCode> {
    let resolved = Resolved::new(common)?;
    let mut cfg = resolved.experiment_config(experiment)?;
    if let Some(tf) = test_fn {
        cfg.test_fn = parse_test_fn(tf)?;
    } else if let Some(tf) = &resolved.file.test_fn {
        cfg.test_fn = parse_test_fn(tf)?;
    }
    let mut writer = RunWriter::new(
        &resolved.out_dir(),
        experiment.slug(),
        cfg.master_seed,
        config_echo(&cfg),
        cfg.workers,
    );
    let report = run_tail_experiment(&cfg)?;
    println!(
        "{} (n={}, d={}, N={}):",
        experiment.slug(),
        cfg.n,
        cfg.d,
        cfg.trials
    );
    print_tail_summary(&report);
    writer.write_payload(&report)?;
    if resolved.emit_csv()? {
        writer.write_csv(&output::tail_csv(&report))?;
    }
    if resolved.plot() {
        writer.write_svg(&plot::tail_plot(&report))?;
    }
    for path in writer.finish()? {
        println!("  wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::NormTail(c) => run_tail_command(Experiment::NormTail, &c, None),
        Command::Maximal(c) => run_tail_command(Experiment::Maximal, &c, None),
        Command::ConvexConc { common, test_fn } => {
            run_tail_command(Experiment::ConvexConc, &common, test_fn.as_deref())
        }
        Command::EuclideanConc(c) => run_tail_command(Experiment::EuclideanConc, &c, None),
        Command::Distance(c) => run_tail_command(Experiment::Distance, &c, None),

        Command::Variance(c) => {
            let resolved = Resolved::new(&c)?;
            let cfg = resolved.experiment_config(Experiment::VarianceScaling)?;
            let mut writer = RunWriter::new(
                &resolved.out_dir(),
                cfg.experiment.slug(),
                cfg.master_seed,
                config_echo(&cfg),
                cfg.workers,
            );
            let report = run_variance_experiment(&cfg)?;
            println!(
                "variance (n={}, d={}, N={}): Var = {:.6}, scale = {}, ratio = {:.4} (±{:.2e})",
                cfg.n,
                cfg.d,
                cfg.trials,
                report.empirical_var,
                report.scale,
                report.ratio,
                report.stderr / report.scale
            );
            writer.write_payload(&report)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::variance_csv(&report))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Condition(c) => {
            let resolved = Resolved::new(&c)?;
            let cfg = resolved.experiment_config(Experiment::Condition)?;
            let mut writer = RunWriter::new(
                &resolved.out_dir(),
                cfg.experiment.slug(),
                cfg.master_seed,
                config_echo(&cfg),
                cfg.workers,
            );
            let report = run_condition_experiment(&cfg)?;
            println!(
                "condition (n={}, d={}, m={}, {} trials): σ_min ≥ {:.5} in {:.1}% \
                 (wilson [{:.3}, {:.3}])",
                cfg.n,
                cfg.d,
                report.m,
                cfg.trials,
                report.threshold,
                100.0 * report.pass_rate,
                report.wilson_lo,
                report.wilson_hi
            );
            writer.write_payload(&report)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::condition_csv(&report))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::MgfChaos { common, eigs } => {
            let resolved = Resolved::new(&common)?;
            let cfg = resolved.experiment_config(Experiment::MgfChaos)?;
            let eig_list = match (&eigs, &resolved.file.eigs) {
                (Some(s), _) => Some(parse_f64_list(s)?),
                (None, Some(list)) => Some(list.values()?),
                (None, None) => None,
            };
            let spec = match eig_list {
                Some(values) => SymmetricMatrixSpec::new(values)?,
                None => SymmetricMatrixSpec::random_uniform(cfg.n, cfg.master_seed)?,
            };
            let mut writer = RunWriter::new(
                &resolved.out_dir(),
                cfg.experiment.slug(),
                cfg.master_seed,
                config_echo(&cfg),
                cfg.workers,
            );
            let report = run_mgf_experiment(&cfg, &spec)?;
            println!(
                "mgf-chaos (n={}, N={}, op={:.4}, hs={:.4}):",
                cfg.n, cfg.trials, report.op_norm, report.hs_norm
            );
            for p in &report.points {
                println!(
                    "  λ={:<10.5} empirical {:<12.6} (±{:.2e}) exact {} bound {:.6}{}{}",
                    p.lambda,
                    p.empirical,
                    p.stderr,
                    p.exact
                        .map(|e| format!("{e:.6}"))
                        .unwrap_or_else(|| "n/a".into()),
                    p.bound,
                    if p.lambda_in_range {
                        ""
                    } else {
                        "  [outside λ-range]"
                    },
                    if p.unreliable { "  [unreliable]" } else { "" },
                );
            }
            writer.write_payload(&report)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::mgf_csv(&report))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::MartingaleCheck {
            common,
            spaces,
            value_bound,
            instances,
        } => {
            let resolved = Resolved::new(&common)?;
            let sizes = match (&spaces, &resolved.file.spaces) {
                (Some(s), _) => parse_usize_list(s)?,
                (None, Some(list)) => list.clone(),
                (None, None) => vec![3, 3, 3],
            };
            let bound = value_bound.or(resolved.file.value_bound).unwrap_or(2.0);
            let count = instances.or(resolved.file.instances).unwrap_or(100);
            let seed = resolved.seed();
            let echo = serde_json::json!({
                "spaces": sizes,
                "value_bound": bound,
                "instances": count,
                "master_seed": seed,
            });
            let mut writer = RunWriter::new(&resolved.out_dir(), "martingale-check", seed, echo, 1);
            let report = run_martingale_check(&sizes, bound, count, seed)?;
            let failures = report.instances.iter().filter(|r| !r.holds).count();
            println!(
                "martingale-check (spaces {:?}, |f| ≤ {bound}, {count} instances): {}",
                sizes,
                if report.all_hold {
                    "all hold".to_string()
                } else {
                    format!("{failures} FAILED")
                }
            );
            writer.write_payload(&report)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::martingale_csv(&report))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(if report.all_hold {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Multipliers {
            common,
            big_m,
            lambda0,
        } => {
            let resolved = Resolved::new(&common)?;
            let d = common.d.or(resolved.file.d).unwrap_or(10);
            let m_coeff = big_m.or(resolved.file.big_m).unwrap_or(1.0);
            let l0 = lambda0.or(resolved.file.lambda0).unwrap_or(0.0);
            if d == 0 {
                return Err(Error::config("d must be >= 1"));
            }
            if m_coeff.is_nan() || m_coeff < 0.0 {
                return Err(Error::config("M must be nonnegative"));
            }
            let seed = resolved.seed();
            let echo = serde_json::json!({ "d": d, "M": m_coeff, "lambda0": l0 });
            let mut writer = RunWriter::new(&resolved.out_dir(), "multipliers", seed, echo, 1);
            let schedule = multipliers(l0, m_coeff, d);
            println!(
                "multipliers (d={d}, M={m_coeff}, λ0={l0}): hypothesis {} / conclusions {}",
                schedule.hypothesis_ok, schedule.bounds_ok
            );
            println!("  λ_d = {}", schedule.sequence[d]);
            writer.write_payload(&schedule)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::multipliers_csv(&schedule))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(if schedule.hypothesis_ok && schedule.bounds_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::OracleSuite(c) => {
            let resolved = Resolved::new(&c)?;
            let seed = resolved.seed();
            let echo = serde_json::json!({ "master_seed": seed });
            let mut writer = RunWriter::new(&resolved.out_dir(), "oracle-suite", seed, echo, 1);
            let checks = run_oracle_suite(seed);
            let mut all_pass = true;
            for check in &checks {
                all_pass &= check.pass;
                println!(
                    "  {:<36} {}  {}",
                    check.name,
                    if check.pass { "ok" } else { "FAILED" },
                    check.detail
                );
            }
            let payload: Vec<serde_json::Value> = checks
                .iter()
                .map(|c| serde_json::json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
                .collect();
            writer.write_payload(&payload)?;
            if resolved.emit_csv()? {
                writer.write_csv(&output::oracle_csv(&checks))?;
            }
            for path in writer.finish()? {
                println!("  wrote {}", path.display());
            }
            Ok(if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
