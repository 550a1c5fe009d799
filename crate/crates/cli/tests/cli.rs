use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use berryquench_cli::args::{Common, MethodArg, SweepArgs};
use berryquench_cli::commands::sweep::{run_with, summary_path, DensitySource};
use berryquench_cli::{run, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use serde_json::Value;
use tempfile::tempdir;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("berryquench").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = cli(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

fn path_arg(p: &Path) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn trace_files_are_byte_identical() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let (code, _, err) = cli(&[
            "trace", "--k-index", "3", "--n", "11", "--tau-q", "0.5,1,2", "--out", &path_arg(p),
        ]);
        assert_eq!(code, EXIT_OK, "{err}");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn trace_example_rows() {
    let (code, out, _) = cli(&["trace", "--k", &format!("{}", PI / 3.0), "--alpha", "0.2"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "tau_q,t,B,gamma_k_raw,gamma_k_mod");
    assert_eq!(lines.len(), 302);
    let field = |l: &str, i: usize| l.split(',').nth(i).unwrap().parse::<f64>().unwrap();
    assert_eq!(field(lines[1], 3), 6.275672520052103);
    let at_minus_one = lines.iter().find(|l| l.starts_with("1,-1,")).unwrap();
    assert!((field(at_minus_one, 3) - 6.110118682899108).abs() < 1e-12);
    assert!((field(lines[301], 3) - 0.1730666242804784).abs() < 1e-12);
}

#[test]
fn isotropic_trace_has_zero_mod_column() {
    let (code, out, _) = cli(&["trace", "--k", "0.7", "--alpha", "0", "--tau-q", "1,3"]);
    assert_eq!(code, EXIT_OK);
    for line in out.lines().skip(1) {
        assert_eq!(line.rsplit(',').next().unwrap(), "0", "{line}");
    }
}

#[test]
fn split_trace_writes_one_file_per_quench_time() {
    let dir = tempdir().unwrap();
    let base = dir.path().join("trace.csv");
    let (code, _, err) = cli(&[
        "trace", "--k", "1", "--tau-q", "1,2", "--split", "--samples", "5", "--out", &path_arg(&base),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut names: Vec<String> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["trace_tau1.csv", "trace_tau2.csv"]);
    let body = fs::read_to_string(dir.path().join("trace_tau2.csv")).unwrap();
    assert!(body.starts_with("t,B,gamma_k_raw,gamma_k_mod\n"));
    assert_eq!(body.lines().count(), 6);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# quench defaults\nn = 101\ntau_q = 2000\nalpha = 0.5\n").unwrap();
    let from_file = json(&["quench", "--config", &path_arg(&cfg)]);
    assert_eq!(from_file["alpha"], 0.5);
    assert_eq!(from_file["n_sites"], 101);
    let overridden = json(&["quench", "--config", &path_arg(&cfg), "--alpha", "1"]);
    assert_eq!(overridden["alpha"], 1.0);
    assert_eq!(overridden["tau_q"], 2000.0);
}

#[test]
fn slow_quench_is_adiabatic() {
    let r = json(&["quench", "--n", "101", "--alpha", "1", "--tau-q", "2000"]);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["adiabatic"], true);
    assert!((r["adiabatic_threshold"].as_f64().unwrap() - 164.498951376534).abs() < 1e-9);
    assert_eq!(r["final_phase"]["formula"], "one_pair");
    assert!(r["final_phase"]["rounding"].as_str().unwrap().contains("rounded"));
}

#[test]
fn isotropic_quench_has_no_kinks() {
    let r = json(&["quench", "--n", "21", "--alpha", "0", "--tau-q", "3", "--convention", "mod2pi"]);
    assert_eq!(r["defects"]["kink_count"], 0.0);
    let total = r["final_phase"]["report"]["total_mod"].as_f64().unwrap();
    assert!(total.min(2.0 * PI - total) < 1e-9, "{total}");
}

#[test]
fn cross_check_reports_both_methods() {
    let r = json(&["quench", "--n", "51", "--tau-q", "10", "--cross-check"]);
    let c = &r["cross_check"];
    let (lz, ode) = (c["analytic_lz"].as_f64().unwrap(), c["numeric_ode"].as_f64().unwrap());
    let rel = c["relative_difference"].as_f64().unwrap();
    assert!((rel - (ode - lz).abs() / lz).abs() < 1e-12);
    assert!(rel < 0.15, "{rel}");
}

fn sweep_args(out: &Path, tau_q: Vec<f64>) -> SweepArgs {
    SweepArgs {
        n: 401,
        alpha: 1.0,
        tau_q,
        tau_q_min: 10.0,
        tau_q_max: 1000.0,
        samples: 9,
        method: MethodArg::AnalyticLz,
        common: Common {
            out: Some(out.to_path_buf()),
            config: None,
        },
    }
}

#[test]
fn injected_power_law_is_recovered() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let density = |t: f64| 0.3 * t.powf(-0.5);
    let code = run_with(
        &sweep_args(&csv, Vec::new()),
        DensitySource::Injected(&density),
        &mut Vec::new(),
        &mut Vec::new(),
    )
    .unwrap();
    assert_eq!(code, EXIT_OK);
    let summary: Value = serde_json::from_str(&fs::read_to_string(summary_path(&csv)).unwrap()).unwrap();
    let exponent = summary["fit"]["exponent"].as_f64().unwrap();
    assert!((exponent + 0.5).abs() <= 1e-12, "{exponent}");
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().next(), Some("tau_q,kink_count,density"));
}

#[test]
fn single_point_sweep_is_a_failure() {
    let dir = tempdir().unwrap();
    let csv = path_arg(&dir.path().join("s.csv"));
    let (code, _, err) = cli(&["sweep", "--n", "401", "--tau-q", "50", "--out", &csv]);
    assert_eq!(code, EXIT_FAILURE);
    assert!(err.contains("insufficient samples"), "{err}");

    let density = |t: f64| t.powf(-0.5);
    let e = run_with(
        &sweep_args(&dir.path().join("s.csv"), vec![50.0]),
        DensitySource::Injected(&density),
        &mut Vec::new(),
        &mut Vec::new(),
    )
    .unwrap_err();
    assert_eq!(e.exit_code(), EXIT_FAILURE);
    assert!(e.to_string().contains("insufficient samples"));
}

#[test]
fn physics_sweep_scales_with_half_power() {
    let dir = tempdir().unwrap();
    let csv = dir.path().join("kz.csv");
    let (code, _, err) = cli(&["sweep", "--n", "401", "--out", &path_arg(&csv)]);
    assert_eq!(code, EXIT_OK, "{err}");
    let summary: Value = serde_json::from_str(&fs::read_to_string(summary_path(&csv)).unwrap()).unwrap();
    let exponent = summary["fit"]["exponent"].as_f64().unwrap();
    assert!((-0.6..=-0.4).contains(&exponent), "{exponent}");
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 10);
}

#[test]
fn audit_values() {
    let r = json(&["audit", "--n", "5"]);
    let records = r["records"].as_array().unwrap();
    assert_eq!(records.len(), 3);
    let by_defects = |d: u64| records.iter().find(|x| x["defect_pairs"] == d).unwrap();
    assert!((by_defects(0)["brute_force"].as_f64().unwrap() - 9.42477796076938).abs() < 1e-12);
    assert_eq!(by_defects(2)["brute_force"].as_f64().unwrap().abs(), 0.0);
    let one = by_defects(1)["checks"].as_array().unwrap();
    let literal = one.iter().find(|c| c["label"] == "one_pair").unwrap();
    assert!((literal["discrepancy"].as_f64().unwrap() - 5.0 * PI).abs() < 1e-9);
}

#[test]
fn audit_skips_impossible_defect_counts() {
    let r = json(&["audit", "--n", "5", "--defects", "1,3"]);
    assert_eq!(r["records"].as_array().unwrap().len(), 1);
    assert_eq!(r["skipped"][0]["defect_pairs"], 3);
}

#[test]
fn validate_sums_and_lz_pass() {
    let (code, out, _) = cli(&["validate", "--suite", "sums"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("reported"));
    let (code, out, _) = cli(&["validate", "--suite", "lz"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn validate_lz_outside_regime_is_skipped() {
    let dir = tempdir().unwrap();
    let report = dir.path().join("v.json");
    let (code, out, _) = cli(&["validate", "--suite", "lz", "--tau-q", "0.1", "--out", &path_arg(&report)]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["summary"]["skipped"], 3);
    assert_eq!(v["summary"]["fail"], 0);
    for c in v["checks"].as_array().unwrap() {
        assert!(c["detail"].as_str().unwrap().starts_with("outside regime"));
    }
}

#[test]
fn validate_oracle_at_coarse_steps() {
    let dir = tempdir().unwrap();
    let report = dir.path().join("o.json");
    let (code, out, _) = cli(&["validate", "--suite", "oracle", "--steps", "256", "--out", &path_arg(&report)]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["summary"]["untestable"], 1);
    assert_eq!(v["summary"]["pass"], 24);
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let dir = tempdir().unwrap();
    let target = dir.path().join("missing").join("x.csv");
    let (code, _, err) = cli(&["trace", "--k", "1", "--out", &path_arg(&target)]);
    assert_eq!(code, EXIT_USAGE);
    assert!(!err.is_empty());
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
    assert_eq!(cli(&["--version"]).0, EXIT_OK);
    assert_eq!(cli(&[]).0, EXIT_USAGE);
}

fn malformed() -> impl Strategy<Value = Vec<String>> {
    let bad_n = prop::sample::select(vec!["0", "1", "2", "4", "-3", "abc", "2.5", ""]);
    let bad_alpha = prop::sample::select(vec!["-0.1", "1.5", "nan", "abc", "inf", ""]);
    let bad_tau = prop::sample::select(vec!["0", "-1", "nan", "inf", "abc", ""]);
    let bad_samples = prop::sample::select(vec!["0", "1", "-2", "x"]);
    let bad_choice = prop::sample::select(vec!["euler", "", "RAW", "mod3pi"]);
    let unknown = "--[a-z]{3,8}".prop_filter("known flag", |f| {
        !matches!(f.as_str(), "--help" | "--version")
    });
    (
        0usize..10,
        bad_n,
        bad_alpha,
        bad_tau,
        bad_samples,
        bad_choice,
        unknown,
        1.0..50.0f64,
    )
        .prop_map(|(which, n, alpha, tau, samples, choice, flag, t)| {
            let t = format!("{t}");
            let v: Vec<String> = match which {
                0 => vec!["quench", "--n", n, "--tau-q", &t].into_iter().map(String::from).collect(),
                1 => vec!["quench", "--n", "11", "--alpha", alpha, "--tau-q", &t].into_iter().map(String::from).collect(),
                2 => vec!["quench", "--n", "11", "--tau-q", tau].into_iter().map(String::from).collect(),
                3 => vec!["trace", "--k", "1", "--samples", samples].into_iter().map(String::from).collect(),
                4 => vec!["trace", "--k", "1", "--alpha", alpha].into_iter().map(String::from).collect(),
                5 => vec!["trace", "--k", "1", "--t-min", "1", "--t-max", &t].into_iter().map(String::from).collect(),
                6 => vec!["quench", "--n", "11", "--tau-q", &t, "--method", choice].into_iter().map(String::from).collect(),
                7 => vec!["sweep", "--n", n, "--out", "/nonexistent/x.csv"].into_iter().map(String::from).collect(),
                8 => vec!["validate", "--suite", choice].into_iter().map(String::from).collect(),
                _ => vec!["audit".to_string(), flag, "1".to_string()],
            };
            v
        })
}

proptest! {
    #![proptest_config(Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(0x5eed_c11),
        failure_persistence: None,
        ..Config::default()
    })]

    #[test]
    fn malformed_input_exits_with_usage_code(args in malformed()) {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out, err) = cli(&argv);
        prop_assert_eq!(code, EXIT_USAGE, "args {:?}\nstdout {}\nstderr {}", args, out, err);
        prop_assert!(!err.is_empty());
    }
}
