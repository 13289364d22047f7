//! End-to-end tests driving the built binary: interface contract, exit codes,
//! file outputs, and reproducibility.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensorconc"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn norm_tail_writes_csv_json_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "norm-tail",
            "--n",
            "20",
            "--d",
            "2",
            "--trials",
            "4000",
            "--grid",
            "5,10,15,20",
            "--seed",
            "7",
            "--format",
            "csv",
            "--out",
            "run",
        ],
    );
    assert_exit(&out, 0);
    let run = dir.path().join("run");
    let csv = fs::read_to_string(run.join("norm-tail-7.csv")).unwrap();
    assert!(csv.starts_with("t,survival,wilson_lo,wilson_hi,bound_default_c,bound_fitted_c\n"));
    assert_eq!(csv.lines().count(), 5);

    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(run.join("manifest.json")).unwrap()).unwrap();
    for output in manifest["outputs"].as_array().unwrap() {
        let path = dir
            .path()
            .join("run")
            .join(Path::new(output.as_str().unwrap()).file_name().unwrap());
        assert!(path.exists(), "manifest references missing {path:?}");
    }
    assert!(manifest["started_at"].is_string() && manifest["finished_at"].is_string());
    assert_eq!(manifest["config"]["n"], 20);
}

#[test]
fn csv_and_json_carry_identical_numeric_values() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "norm-tail",
            "--n",
            "30",
            "--d",
            "2",
            "--trials",
            "3000",
            "--grid",
            "3,6,9",
            "--seed",
            "2",
            "--format",
            "csv",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("norm-tail-2.json")).unwrap())
            .unwrap();
    let csv = fs::read_to_string(dir.path().join("norm-tail-2.csv")).unwrap();
    for (row, point) in csv.lines().skip(1).zip(json["points"].as_array().unwrap()) {
        let cells: Vec<&str> = row.split(',').collect();
        let parse = |s: &str| s.parse::<f64>().unwrap();
        // round-trip-exact equality between the two serializations
        assert_eq!(parse(cells[0]), point["threshold"].as_f64().unwrap());
        assert_eq!(parse(cells[1]), point["survival"].as_f64().unwrap());
        assert_eq!(parse(cells[2]), point["wilson_lo"].as_f64().unwrap());
        assert_eq!(parse(cells[3]), point["wilson_hi"].as_f64().unwrap());
        assert_eq!(parse(cells[4]), point["bound_default_c"].as_f64().unwrap());
    }
}

#[test]
fn identical_flags_reproduce_identical_json_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let args_base = [
        "maximal",
        "--n",
        "50",
        "--d",
        "4",
        "--trials",
        "6000",
        "--grid",
        "0.25,0.5,1",
        "--seed",
        "11",
    ];
    let mut one = args_base.to_vec();
    one.extend(["--workers", "1", "--out", "a"]);
    assert_exit(&run_in(dir.path(), &one), 0);
    let mut four = args_base.to_vec();
    four.extend(["--workers", "4", "--out", "b"]);
    assert_exit(&run_in(dir.path(), &four), 0);
    let a = fs::read(dir.path().join("a/maximal-11.json")).unwrap();
    let b = fs::read(dir.path().join("b/maximal-11.json")).unwrap();
    assert_eq!(a, b, "payloads differ across worker counts");
}

#[test]
fn multipliers_example_and_verdict_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "multipliers",
            "--d",
            "10",
            "--M",
            "2",
            "--lambda0",
            "0.00625",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("multipliers-0.json")).unwrap())
            .unwrap();
    assert_eq!(json["hypothesis_ok"], true);
    assert_eq!(json["bounds_ok"], true);
    assert_eq!(json["sequence"].as_array().unwrap().len(), 11);

    // hypothesis violated -> exit 1
    let out = run_in(
        dir.path(),
        &[
            "multipliers",
            "--d",
            "10",
            "--M",
            "2",
            "--lambda0",
            "0.5",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 1);
}

#[test]
fn condition_reports_threshold_and_per_trial_sigmas() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "condition",
            "--n",
            "8",
            "--d",
            "2",
            "--epsilon",
            "0.5",
            "--trials",
            "20",
            "--seed",
            "1",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("condition-1.json")).unwrap())
            .unwrap();
    assert!((json["threshold"].as_f64().unwrap() - 0.35355).abs() < 1e-4);
    assert_eq!(json["m"], 32);
    assert_eq!(json["trials"].as_array().unwrap().len(), 20);
    assert!(json["trials"][0]["sigma_min"].as_f64().unwrap() > 0.0);
    assert!(json["pass_rate"].as_f64().unwrap() >= 0.95);
}

#[test]
fn config_file_is_merged_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.toml"),
        "n = 16\nd = 2\ntrials = 2000\ngrid = [2.0, 4.0, 8.0]\nseed = 9\ndist = {kind = \"rademacher\"}\n",
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &[
            "norm-tail",
            "--config",
            "exp.toml",
            "--n",
            "8",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    // flag --n overrides the file; everything else comes from the file
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("norm-tail-9.json")).unwrap())
            .unwrap();
    let cfg = &json["metadata"]["config"];
    assert_eq!(cfg["n"], 8);
    assert_eq!(cfg["trials"], 2000);
    assert_eq!(cfg["dist"]["kind"], "rademacher");
    assert_eq!(cfg["master_seed"], 9);
}

#[test]
fn bad_flags_and_bad_parameters_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["norm-tail", "--bogus"]);
    assert_exit(&out, 2);
    let out = run_in(
        dir.path(),
        &["norm-tail", "--dist", "bernoulli:0.9", "--out", "."],
    );
    assert_exit(&out, 2);
    let out = run_in(
        dir.path(),
        &["distance", "--n", "4", "--d", "2", "--out", "."],
    );
    assert_exit(&out, 2); // missing --k
    let out = run_in(dir.path(), &["norm-tail", "--grid", "3,2,1", "--out", "."]);
    assert_exit(&out, 2); // non-increasing grid
}

#[test]
fn variance_refusal_is_a_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "variance", "--n", "100", "--d", "400", "--trials", "10000", "--out", ".",
        ],
    );
    assert_exit(&out, 3);
}

#[test]
fn plot_emits_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "maximal",
            "--n",
            "40",
            "--d",
            "3",
            "--trials",
            "3000",
            "--grid",
            "0.25,0.5,1",
            "--seed",
            "3",
            "--plot",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let svg = fs::read_to_string(dir.path().join("maximal-3.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("empirical survival"));
}

#[test]
fn oracle_suite_and_martingale_check_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["oracle-suite", "--seed", "5", "--out", "."]);
    assert_exit(&out, 0);
    let out = run_in(
        dir.path(),
        &[
            "martingale-check",
            "--spaces",
            "3,3",
            "--value-bound",
            "1.5",
            "--instances",
            "30",
            "--seed",
            "8",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let json: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("martingale-check-8.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(json["all_hold"], true);
}

#[test]
fn mgf_chaos_accepts_negative_lambda_grid_and_explicit_eigs() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "mgf-chaos",
            "--n",
            "4",
            "--trials",
            "4000",
            "--grid",
            "-0.1,0.1",
            "--eigs",
            "0.5,-0.5,0.25,0.1",
            "--seed",
            "6",
            "--out",
            ".",
        ],
    );
    assert_exit(&out, 0);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("mgf-chaos-6.json")).unwrap())
            .unwrap();
    assert_eq!(json["eigenvalues"].as_array().unwrap().len(), 4);
    assert_eq!(json["points"][0]["lambda"].as_f64().unwrap(), -0.1);
    assert!(json["points"][0]["exact"].is_number());
}
