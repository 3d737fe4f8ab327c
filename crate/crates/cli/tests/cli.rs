use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rblab_cli::config::{parse_config, SolveConfig};
use rblab_core::harness::ExperimentConfig;
use serde_json::Value;
use tempfile::TempDir;

fn rblab(args: &[&str], env_threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rblab"));
    cmd.args(args).env_remove("RBLAB_THREADS");
    if let Some(t) = env_threads {
        cmd.env("RBLAB_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn error_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|e| panic!("stderr is not JSON ({e}): {text}"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const ROU_SOLVE: &str = r#"{
  "model": {
    "x0": 0.5, "lambda": 5.0, "sigma": 1.0, "drift": [0.0, -1.0],
    "noise": {"kind": "rosenblatt", "h": 0.75},
    "fine_steps": 512
  },
  "seed": 11
}"#;

fn small_campaign() -> String {
    r#"{
  "model": {
    "x0": 0.5, "lambda": 5.0, "sigma": 1.0, "drift": [0.0, -1.0],
    "noise": {"kind": "rosenblatt", "h": 0.75},
    "fine_steps": 1024
  },
  "obs_sizes": [64, 256, 1024],
  "replications": 24,
  "master_seed": 5,
  "estimators": ["diffusion", "lambda_known", "lambda_plugin"],
  "d_h_source": {"table": {"points": [{"h": 0.501, "d": 0.06}, {"h": 0.999, "d": 0.95}]}}
}"#
    .to_string()
}

#[test]
fn hurst_out_of_range_is_a_range_error_naming_the_interval() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "n.json",
        r#"{"kind": "fbm", "h": 1.2, "n_steps": 16, "seed": 0}"#,
    );
    let out = rblab(
        &[
            "simulate-noise",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            "x",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["error"]["kind"], "RangeError");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("(1/2, 1)"));
}

#[test]
fn unknown_keys_are_schema_errors_with_a_path() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "s.json",
        &ROU_SOLVE.replace("\"x0\"", "\"x_0\""),
    );
    let out = rblab(
        &["solve", "--config", cfg.to_str().unwrap(), "--out", "x"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let err = error_json(&out);
    assert_eq!(err["error"]["kind"], "SchemaError");
    assert_eq!(err["error"]["path"], "model.x_0");
}

#[test]
fn inadmissible_drift_is_a_range_error() {
    let doc = ROU_SOLVE.replace("[0.0, -1.0]", "[0.0, 0.0, 0.0, 1.0]");
    let err = parse_config::<SolveConfig>(&doc, &[]).unwrap_err();
    assert_eq!(err.kind(), "RangeError");
}

#[test]
fn minimal_rou_config_parses_and_round_trips() {
    let cfg: SolveConfig = parse_config(ROU_SOLVE, &[]).unwrap();
    assert_eq!(cfg.model.x0, 0.5);
    assert_eq!(cfg.model.lambda, 5.0);
    assert_eq!(cfg.model.drift.coefficients(), &[0.0, -1.0]);
    assert_eq!(cfg.model.noise.h().value(), 0.75);
    let again: SolveConfig = parse_config(&serde_json::to_string(&cfg).unwrap(), &[]).unwrap();
    assert_eq!(cfg, again);

    let exp: ExperimentConfig = parse_config(&small_campaign(), &[]).unwrap();
    let again: ExperimentConfig = parse_config(&serde_json::to_string(&exp).unwrap(), &[]).unwrap();
    assert_eq!(exp, again);
}

#[test]
fn set_overrides_apply_before_validation() {
    let cfg: SolveConfig =
        parse_config(ROU_SOLVE, &["model.noise.h=0.6".into(), "seed=3".into()]).unwrap();
    assert_eq!(cfg.model.noise.h().value(), 0.6);
    assert_eq!(cfg.seed, 3);
    let err = parse_config::<SolveConfig>(ROU_SOLVE, &["model.noise.h=0.4".into()]).unwrap_err();
    assert_eq!(err.kind(), "RangeError");
    let err = parse_config::<ExperimentConfig>(&small_campaign(), &["obs_sizes=[64, 100]".into()])
        .unwrap_err();
    assert_eq!(err.kind(), "RangeError");
}

#[test]
fn solve_writes_solution_noise_and_sidecar() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "s.json", ROU_SOLVE);
    let out_dir = tmp.path().join("sol");
    let out = rblab(
        &[
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in ["solution.csv", "noise.csv", "model.json", "config.json"] {
        assert!(out_dir.join(f).is_file(), "{f} missing");
    }
    let csv = fs::read_to_string(out_dir.join("solution.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("t,value"));
    assert_eq!(csv.lines().count(), 514);
}

#[test]
fn estimate_on_odd_path_fails_with_odd_sample_size() {
    let tmp = TempDir::new().unwrap();
    let mut csv = String::from("t,value\n");
    for i in 0..=7 {
        csv.push_str(&format!("{},{}\n", i as f64 / 7.0, (i * i) as f64 * 0.01));
    }
    let input = write(tmp.path(), "odd.csv", &csv);
    let doc = format!(
        r#"{{"input": {}, "estimators": ["diffusion"], "drift": [0.0, -1.0]}}"#,
        serde_json::to_string(input.to_str().unwrap()).unwrap()
    );
    let cfg = write(tmp.path(), "e.json", &doc);
    let out_dir = tmp.path().join("est");
    let out = rblab(
        &[
            "estimate",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ],
        None,
    );
    assert_ne!(out.status.code(), Some(0));
    assert_eq!(error_json(&out)["error"]["kind"], "OddSampleSize");
    assert!(!out_dir.exists());
}

#[test]
fn estimate_writes_report_for_a_simulated_path() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "s.json", ROU_SOLVE);
    let sol = tmp.path().join("sol");
    assert!(rblab(
        &[
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            sol.to_str().unwrap()
        ],
        None
    )
    .status
    .success());
    let doc = format!(
        r#"{{"input": {}, "estimators": ["diffusion", "lambda_known"], "drift": [0.0, -1.0],
            "h": 0.75, "sigma": 1.0, "d": {{"override": {{"value": 0.65}}}}}}"#,
        serde_json::to_string(sol.join("solution.csv").to_str().unwrap()).unwrap()
    );
    let ecfg = write(tmp.path(), "e.json", &doc);
    let est = tmp.path().join("est");
    let out = rblab(
        &[
            "estimate",
            "--config",
            ecfg.to_str().unwrap(),
            "--out",
            est.to_str().unwrap(),
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: Value =
        serde_json::from_str(&fs::read_to_string(est.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["n"], 512);
    assert!(report["diffusion"]["h_hat"].as_f64().unwrap() > 0.5);
    assert!(report["lambda_known"]["lambda_hat"].is_number());
}

#[test]
fn calibrate_d_writes_table_with_stability_diagnostic() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("cal");
    let out = rblab(
        &[
            "calibrate-d",
            "--h",
            "0.75",
            "--set",
            "settings.n=1024",
            "--set",
            "settings.seeds=40",
            "--out",
            out_dir.to_str().unwrap(),
        ],
        Some("2"),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("d_table.json")).unwrap()).unwrap();
    let cal = &table["calibrations"][0];
    assert_eq!(cal["h"], 0.75);
    let d = cal["value"].as_f64().unwrap();
    assert!(d > 0.4 && d < 0.9, "d = {d}");
    assert!(cal["value_half"].is_number());
    assert!(cal["relative_difference"].is_number());
    assert_eq!(table["d"]["table"]["points"][0]["d"].as_f64(), Some(d));
}

fn campaign_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn experiment_outputs_are_identical_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "c.json", &small_campaign());
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let c = tmp.path().join("c");
    let ra = rblab(
        &[
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            a.to_str().unwrap(),
            "--threads",
            "1",
        ],
        None,
    );
    assert!(
        ra.status.success(),
        "{}",
        String::from_utf8_lossy(&ra.stderr)
    );
    let rb = rblab(
        &[
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            b.to_str().unwrap(),
        ],
        Some("4"),
    );
    assert!(rb.status.success());
    assert_eq!(campaign_files(&a), campaign_files(&b));

    let names: Vec<String> = campaign_files(&a).into_iter().map(|(n, _)| n).collect();
    for f in [
        "config.json",
        "replications.csv",
        "summary.csv",
        "slopes.csv",
        "metadata.json",
        "qq_h_hat_1024.csv",
    ] {
        assert!(names.iter().any(|n| n == f), "{f} missing from {names:?}");
    }
    let reps = fs::read_to_string(a.join("replications.csv")).unwrap();
    assert_eq!(
        reps.lines().next(),
        Some("index,seed,n,estimator,estimate,truth,error_tag")
    );
    assert_eq!(reps.lines().count(), 1 + 24 * 3 * 4);

    let rc = rblab(
        &[
            "experiment",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            c.to_str().unwrap(),
            "--seed",
            "6",
        ],
        None,
    );
    assert!(rc.status.success());
    assert_ne!(
        fs::read(a.join("replications.csv")).unwrap(),
        fs::read(c.join("replications.csv")).unwrap()
    );
}

#[test]
fn existing_output_is_never_overwritten() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "s.json", ROU_SOLVE);
    let out_dir = tmp.path().join("busy");
    fs::create_dir(&out_dir).unwrap();
    fs::write(out_dir.join("keep.txt"), "precious").unwrap();
    let out = rblab(
        &[
            "solve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ],
        None,
    );
    assert_ne!(out.status.code(), Some(0));
    assert_eq!(
        fs::read_to_string(out_dir.join("keep.txt")).unwrap(),
        "precious"
    );
    assert_eq!(fs::read_dir(&out_dir).unwrap().count(), 1);
}

#[test]
fn bad_thread_environment_is_a_usage_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "s.json", ROU_SOLVE);
    let out = rblab(
        &["solve", "--config", cfg.to_str().unwrap(), "--out", "x"],
        Some("many"),
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_json(&out)["error"]["kind"], "UsageError");
}
