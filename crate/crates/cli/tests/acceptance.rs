//! Acceptance suite. Prints one pass/fail line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use berryquench_cli::commands::validate::{lz_suite, oracle_suite, sums_suite, Check, Status};
use berryquench_core::dynamics::{
    evolve_mode_detailed, final_phase_one_pair, kink_count, logspace, scaling_fit,
};
use berryquench_core::model::{energy_gap, mode_phase, mode_phase_at_time, wrap_phase};
use berryquench_core::{
    ChainSpec, IntegratorConfig, KinkMethod, ModeGrid, PhaseConvention, QuenchSchedule,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

const RAW: PhaseConvention = PhaseConvention::Raw;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("berryquench").chain(args.iter().copied());
    let code = berryquench_cli::run(argv, &mut out, &mut err);
    (code, out)
}

fn parse_csv(bytes: &[u8]) -> Vec<Vec<f64>> {
    std::str::from_utf8(bytes)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn failures(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| format!("{} {}", c.suite, c.name))
        .collect()
}

fn count(checks: &[Check], s: Status) -> usize {
    checks.iter().filter(|c| c.status == s).count()
}

fn trace_family() -> Outcome {
    const PHASE_AT_CRITICAL: f64 = 6.110118682899108;
    const PHASE_AT_ZERO: f64 = 0.1730666242804784;
    let (k, alpha) = (PI / 3.0, 0.2);
    let k_arg = format!("{k}");

    let proxy = mode_phase(k, 1e3, alpha, RAW).map_err(|e| e.to_string())?;
    ensure((proxy - TAU).abs() <= 1e-4, || format!("B = 1e3 proxy {proxy} not within 1e-4 of 2pi"))?;

    for tau in [0.5, 1.0, 2.0, 5.0] {
        let tau_arg = format!("{tau}");
        let (code, bytes) = cli(&[
            "trace", "--k", &k_arg, "--alpha", "0.2", "--tau-q", &tau_arg,
            "--t-min", "-10", "--t-max", "0", "--samples", "1001",
        ]);
        ensure(code == 0, || format!("trace exited {code} for tau_q = {tau}"))?;
        let rows = parse_csv(&bytes);
        ensure(rows.len() == 1001, || format!("{} rows for tau_q = {tau}", rows.len()))?;
        for w in rows.windows(2) {
            ensure(w[1][3] < w[0][3], || format!("not strictly decreasing at t = {} (tau_q = {tau})", w[1][1]))?;
        }
        let last = rows.last().unwrap()[3];
        ensure((last - PHASE_AT_ZERO).abs() <= 1e-9, || format!("phase at t = 0 is {last}"))?;

        let sched = QuenchSchedule::new(tau).unwrap();
        let unit = QuenchSchedule::new(1.0).unwrap();
        let at_critical = mode_phase_at_time(k, -tau, &sched, alpha, RAW).unwrap();
        ensure((at_critical - PHASE_AT_CRITICAL).abs() <= 1e-9, || {
            format!("phase at t = -tau_q is {at_critical} for tau_q = {tau}")
        })?;
        for row in &rows {
            let t = row[1];
            let rescaled = mode_phase_at_time(k, t / tau, &unit, alpha, RAW).unwrap();
            ensure((row[3] - rescaled).abs() <= 1e-12, || {
                format!("time rescaling broken at t = {t}, tau_q = {tau}: {} vs {rescaled}", row[3])
            })?;
        }
    }
    Ok(format!("4 traces of 1001 rows; 2pi proxy error {:.1e}", (proxy - TAU).abs()))
}

fn landau_zener() -> Outcome {
    let checks = lz_suite(101, &[20.0, 50.0, 100.0]).map_err(|e| e.to_string())?;
    let failed = failures(&checks);
    ensure(failed.is_empty(), || format!("failed: {}", failed.join("; ")))?;
    let worst = checks.iter().filter_map(|c| c.error).fold(0.0, f64::max);
    ensure(count(&checks, Status::Pass) > 0, || "no mode inside the regime".into())?;
    Ok(format!(
        "{} modes checked, {} outside regime, worst relative error {worst:.3e}",
        count(&checks, Status::Pass),
        count(&checks, Status::Skipped)
    ))
}

fn kibble_zurek() -> Outcome {
    let spec = ChainSpec::new(401, 1.0).unwrap();
    let config = IntegratorConfig::default();
    let taus = logspace(10.0, 1e3, 9);
    let r = scaling_fit(&spec, &taus, KinkMethod::AnalyticLz, &config).map_err(|e| e.to_string())?;
    let slope = r.fit.exponent;
    ensure((slope + 0.5).abs() <= 0.1, || format!("slope {slope} outside -0.5 +- 0.1"))?;

    let mut worst = 0.0f64;
    for tau in [10.0, 31.6, 100.0] {
        let sched = QuenchSchedule::new(tau).unwrap();
        let lz = kink_count(&spec, &sched, KinkMethod::AnalyticLz, &config).unwrap().density;
        let ode = kink_count(&spec, &sched, KinkMethod::NumericOde, &config)
            .map_err(|e| e.to_string())?
            .density;
        let rel = (ode - lz).abs() / lz;
        worst = worst.max(rel);
        ensure(rel <= 0.15, || format!("numeric density {ode} vs analytic {lz} at tau_q = {tau}"))?;
    }
    Ok(format!("slope {slope:.4}, worst numeric/analytic density gap {:.2}%", 100.0 * worst))
}

fn oracle_equivalence() -> Outcome {
    let checks = oracle_suite(1024).map_err(|e| e.to_string())?;
    let failed = failures(&checks);
    ensure(failed.is_empty(), || format!("failed: {}", failed.join("; ")))?;
    let loops = checks.iter().filter(|c| c.name.starts_with("loop phase"));
    let passed = loops.clone().filter(|c| c.status == Status::Pass).count();
    let untestable = loops.clone().filter(|c| c.status == Status::Untestable).count();
    let doubling = checks.iter().filter(|c| c.name.starts_with("step doubling") && c.status == Status::Pass).count();
    ensure(passed == 12 && doubling == 12, || format!("{passed} fixtures and {doubling} doubling checks passed"))?;
    ensure(untestable == 1, || "ferromagnetic probe not reported untestable".into())?;
    let worst = checks
        .iter()
        .filter(|c| c.name.starts_with("loop phase"))
        .filter_map(|c| c.error)
        .fold(0.0, f64::max);
    Ok(format!("12 fixtures, worst difference {worst:.2e}, step doubling converged, 1 untestable"))
}

fn summation_identities() -> Outcome {
    let checks = sums_suite().map_err(|e| e.to_string())?;
    let failed = failures(&checks);
    ensure(failed.is_empty(), || format!("failed: {}", failed.join("; ")))?;
    let spec = ChainSpec::new(5, 1.0).unwrap();
    let one_pair = final_phase_one_pair(&spec, RAW).unwrap().total_raw;
    ensure((one_pair - 8.224796345905053).abs() <= 1e-9, || format!("one-pair phase {one_pair}"))?;
    let audit = checks
        .iter()
        .find(|c| c.status == Status::Reported)
        .ok_or("audit row missing")?;
    let literal = audit.value.unwrap();
    ensure((literal - 23.93275961385402).abs() <= 1e-9, || format!("literal closed form {literal}"))?;
    Ok(format!(
        "identities hold to 1e-9; one-pair N=5 = {one_pair:.9}; audit reports {literal:.5} vs {:.5}",
        audit.reference.unwrap()
    ))
}

fn pinned(seed: u64) -> Config {
    Config {
        cases: 1000,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    }
}

fn property<S: Strategy>(
    seed: u64,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    TestRunner::new(pinned(seed))
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn invariants() -> Outcome {
    let k = 1e-6..PI;
    let field = 0.0..50.0f64;
    let alpha = 0.0..=1.0f64;

    property(0xacce_0001, "phase bounds", (k.clone(), field.clone(), alpha.clone()), |(k, b, a)| {
        let g = mode_phase(k, b, a, RAW).unwrap();
        prop_assert!((0.0..=TAU).contains(&g));
        Ok(())
    })?;
    property(0xacce_0002, "evenness", (k.clone(), field.clone(), alpha.clone()), |(k, b, a)| {
        prop_assert_eq!(mode_phase(k, b, a, RAW).unwrap(), mode_phase(-k, b, a, RAW).unwrap());
        Ok(())
    })?;
    property(
        0xacce_0003,
        "monotonicity in t",
        (1e-3..PI, 1e-3..=1.0f64, 0.1..100.0f64, -50.0..0.0f64, 1e-3..1.0f64),
        |(k, a, tau, t, frac)| {
            let sched = QuenchSchedule::new(tau).unwrap();
            let later = t * (1.0 - frac);
            let g0 = mode_phase_at_time(k, t, &sched, a, RAW).unwrap();
            let g1 = mode_phase_at_time(k, later, &sched, a, RAW).unwrap();
            prop_assert!(g1 <= g0, "t {} -> {}: {} -> {}", t, later, g0, g1);
            Ok(())
        },
    )?;
    property(0xacce_0004, "isotropic nullity", (k.clone(), field.clone()), |(k, b)| {
        let g = mode_phase(k, b, 0.0, PhaseConvention::Mod2Pi).unwrap();
        prop_assert!(g.min(TAU - g) <= 1e-12, "{}", g);
        Ok(())
    })?;
    property(
        0xacce_0005,
        "gap positivity",
        ((1usize..=500).prop_map(|p| 2 * p + 1), -5.0..50.0f64, 1e-6..=1.0f64),
        |(n, b, a)| {
            let spec = ChainSpec::new(n, a).unwrap();
            for k in ModeGrid::half_integer(&spec).iter() {
                prop_assert!(energy_gap(k, b, a) > 0.0);
            }
            Ok(())
        },
    )?;
    property(
        0xacce_0006,
        "norm conservation",
        (1e-3..(PI - 1e-3), alpha.clone(), 0.1..100.0f64),
        |(k, a, tau)| {
            let sched = QuenchSchedule::new(tau).unwrap();
            let e = evolve_mode_detailed(k, a, &sched, &IntegratorConfig::default()).unwrap();
            prop_assert!(e.norm_drift <= 1e-9, "drift {}", e.norm_drift);
            Ok(())
        },
    )?;
    property(
        0xacce_0007,
        "byte determinism",
        (1e-3..PI, 0.0..=1.0f64, 0.1..10.0f64, 2usize..40),
        |(k, a, tau, samples)| {
            let args = [
                "trace".to_string(),
                format!("--k={k}"),
                format!("--alpha={a}"),
                format!("--tau-q={tau}"),
                format!("--samples={samples}"),
            ];
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let first = cli(&argv);
            let second = cli(&argv);
            prop_assert_eq!(first.0, 0);
            prop_assert_eq!(first, second);
            Ok(())
        },
    )?;
    // Keep the wrapped form consistent with the raw one.
    property(0xacce_0008, "mod 2pi reduction", (k, field, alpha), |(k, b, a)| {
        let raw = mode_phase(k, b, a, RAW).unwrap();
        prop_assert_eq!(mode_phase(k, b, a, PhaseConvention::Mod2Pi).unwrap(), wrap_phase(raw));
        Ok(())
    })?;
    Ok("8 properties x 1000 cases, seed-pinned".into())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    // libtest-style flags such as --nocapture are accepted and ignored.
    let criteria = [
        Criterion { id: 1, name: "phase traces", budget: Duration::from_secs(1), check: trace_family },
        Criterion { id: 2, name: "Landau-Zener", budget: Duration::from_secs(60), check: landau_zener },
        Criterion { id: 3, name: "Kibble-Zurek scaling", budget: Duration::from_secs(300), check: kibble_zurek },
        Criterion { id: 4, name: "exact-oracle equivalence", budget: Duration::from_secs(120), check: oracle_equivalence },
        Criterion { id: 5, name: "summation identities", budget: Duration::from_secs(10), check: summation_identities },
        Criterion { id: 6, name: "invariant suites", budget: Duration::from_secs(60), check: invariants },
    ];
    let mut all_ok = true;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {:?} budget", c.budget)),
            Err(e) => (false, e),
        };
        all_ok &= ok;
        println!(
            "criterion {} {:<26} {} ({:.2}s) {detail}",
            c.id,
            c.name,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
