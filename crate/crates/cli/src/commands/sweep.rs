use std::io::Write;
use std::path::{Path, PathBuf};

use berryquench_core::dynamics::fit::{check_scaling_samples, MIN_FIT_SAMPLES};
use berryquench_core::dynamics::{fit_power_law, logspace, scaling_fit, PowerLawFit, ScalingPoint};
use berryquench_core::{IntegratorConfig, KinkMethod};
use serde::Serialize;

use super::{chain, schedule};
use crate::args::SweepArgs;
use crate::output::{to_json, write_atomic, Csv};
use crate::{CliError, CliResult, EXIT_OK, SCHEMA_VERSION};

pub const HEADER: [&str; 3] = ["tau_q", "kink_count", "density"];

/// Where the kink densities come from.
pub enum DensitySource<'a> {
    Physics,
    /// Replace the physics with a given `n(τ_q)`; used to test the plumbing.
    Injected(&'a dyn Fn(f64) -> f64),
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub schema_version: u32,
    pub command: &'static str,
    pub n_sites: usize,
    pub alpha: f64,
    pub method: String,
    pub tau_q_min: f64,
    pub tau_q_max: f64,
    pub fit: PowerLawFit,
}

/// `<stem>.fit.json` next to the CSV.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("fit.json")
}

fn quench_times(args: &SweepArgs) -> CliResult<Vec<f64>> {
    let mut taus = if args.tau_q.is_empty() {
        if !(args.tau_q_min > 0.0 && args.tau_q_min < args.tau_q_max && args.tau_q_max.is_finite()) {
            return Err(CliError::Usage(format!(
                "need 0 < --tau-q-min < --tau-q-max, got {} and {}",
                args.tau_q_min, args.tau_q_max
            )));
        }
        logspace(args.tau_q_min, args.tau_q_max, args.samples)
    } else {
        args.tau_q.clone()
    };
    for &t in &taus {
        schedule(t)?;
    }
    taus.sort_by(f64::total_cmp);
    Ok(taus)
}

pub fn run(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    run_with(args, DensitySource::Physics, out, err)
}

pub fn run_with(
    args: &SweepArgs,
    source: DensitySource<'_>,
    _out: &mut dyn Write,
    _err: &mut dyn Write,
) -> CliResult<i32> {
    let spec = chain(args.n, args.alpha)?;
    let Some(csv_path) = args.common.out.as_deref() else {
        return Err(CliError::Usage("sweep needs --out for its CSV and fit summary".into()));
    };
    let taus = quench_times(args)?;
    let method: KinkMethod = args.method.into();

    let (points, fit, method_label) = match source {
        DensitySource::Physics => {
            check_scaling_samples(&spec, &taus)?;
            let r = scaling_fit(&spec, &taus, method, &IntegratorConfig::default())?;
            let label = serde_json::to_value(method)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            (r.points, r.fit, label)
        }
        DensitySource::Injected(density) => {
            if taus.len() < MIN_FIT_SAMPLES {
                return Err(CliError::Failure(format!(
                    "insufficient samples: {} (need at least {MIN_FIT_SAMPLES})",
                    taus.len()
                )));
            }
            let n = spec.n_sites() as f64;
            let points: Vec<ScalingPoint> = taus
                .iter()
                .map(|&t| {
                    let d = density(t);
                    ScalingPoint {
                        tau_q: t,
                        kink_count: d * n,
                        density: d,
                    }
                })
                .collect();
            let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.tau_q, p.density)).collect();
            (points, fit_power_law(&xy)?, "injected".to_string())
        }
    };

    let mut csv = Csv::new(&HEADER);
    for p in &points {
        csv.row(&[p.tau_q, p.kink_count, p.density]);
    }
    let summary = SweepSummary {
        schema_version: SCHEMA_VERSION,
        command: "sweep",
        n_sites: spec.n_sites(),
        alpha: spec.alpha(),
        method: method_label,
        tau_q_min: taus[0],
        tau_q_max: taus[taus.len() - 1],
        fit,
    };
    write_atomic(csv_path, csv.as_str().as_bytes())?;
    write_atomic(&summary_path(csv_path), to_json(&summary)?.as_bytes())?;
    Ok(EXIT_OK)
}
