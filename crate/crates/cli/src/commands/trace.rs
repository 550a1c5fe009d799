use std::io::Write;
use std::path::{Path, PathBuf};

use berryquench_core::model::{field_at, mode_phase_at_time, wrap_phase};
use berryquench_core::{Error, ModeGrid, PhaseConvention};

use super::{chain, check_alpha, schedule};
use crate::args::TraceArgs;
use crate::output::{emit, fmt_f64, Csv};
use crate::{CliError, CliResult, EXIT_OK};

pub const LONG_HEADER: [&str; 5] = ["tau_q", "t", "B", "gamma_k_raw", "gamma_k_mod"];
pub const SPLIT_HEADER: [&str; 4] = ["t", "B", "gamma_k_raw", "gamma_k_mod"];

/// `samples` uniformly spaced times from `t_min` to `t_max` inclusive.
pub fn time_grid(t_min: f64, t_max: f64, samples: usize) -> Vec<f64> {
    let span = t_max - t_min;
    let last = (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            if i + 1 == samples {
                t_max
            } else {
                t_min + span * i as f64 / last
            }
        })
        .collect()
}

fn resolve_k(args: &TraceArgs) -> CliResult<f64> {
    match (args.k, args.k_index, args.n) {
        (Some(k), _, _) => {
            if !k.is_finite() {
                return Err(CliError::Usage(format!("--k {k} is not a finite momentum")));
            }
            Ok(k)
        }
        (None, Some(j), Some(n)) => {
            let spec = chain(n, args.alpha)?;
            let grid = ModeGrid::half_integer(&spec);
            if j == 0 || j > grid.len() {
                return Err(CliError::Usage(format!(
                    "--k-index {j} is out of range: N = {n} has indices 1..={}",
                    grid.len()
                )));
            }
            Ok(grid.momenta()[j - 1])
        }
        _ => Err(CliError::Usage("give --k, or --k-index with --n".into())),
    }
}

fn split_path(base: &Path, tau_q: f64) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "trace".into());
    let ext = base
        .extension()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    base.with_file_name(format!("{stem}_tau{}.{ext}", fmt_f64(tau_q)))
}

pub fn run(args: &TraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    check_alpha(args.alpha)?;
    let k = resolve_k(args)?;
    if !(args.t_max <= 0.0) || !(args.t_min < args.t_max) || !args.t_min.is_finite() {
        return Err(CliError::Usage(format!(
            "time range [{}, {}] must satisfy t-min < t-max <= 0",
            args.t_min, args.t_max
        )));
    }
    if args.samples < 2 {
        return Err(CliError::Usage("--samples must be at least 2".into()));
    }
    if args.tau_q.is_empty() {
        return Err(CliError::Usage("--tau-q needs at least one value".into()));
    }
    let schedules = args
        .tau_q
        .iter()
        .map(|&t| schedule(t))
        .collect::<CliResult<Vec<_>>>()?;
    let times = time_grid(args.t_min, args.t_max, args.samples);

    let mut tables = Vec::with_capacity(schedules.len());
    for s in &schedules {
        let mut csv = Csv::new(if args.split { &SPLIT_HEADER } else { &LONG_HEADER });
        for &t in &times {
            let b = field_at(t, s);
            let raw = match mode_phase_at_time(k, t, s, args.alpha, PhaseConvention::Raw) {
                Ok(g) => g,
                Err(e @ Error::Gapless { .. }) => {
                    writeln!(err, "warning: skipping t = {}: {e}", fmt_f64(t))?;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            if args.split {
                csv.row(&[t, b, raw, wrap_phase(raw)]);
            } else {
                csv.row(&[s.tau_q(), t, b, raw, wrap_phase(raw)]);
            }
        }
        tables.push((s.tau_q(), csv));
    }

    if args.split {
        let Some(base) = args.common.out.as_deref() else {
            return Err(CliError::Usage("--split needs --out".into()));
        };
        let mut paths: Vec<PathBuf> = tables.iter().map(|(t, _)| split_path(base, *t)).collect();
        paths.sort();
        paths.dedup();
        if paths.len() != tables.len() {
            return Err(CliError::Usage("--tau-q values must be distinct with --split".into()));
        }
        for (tau, csv) in &tables {
            emit(Some(&split_path(base, *tau)), csv.as_str(), out)?;
        }
    } else {
        let mut text = String::new();
        for (i, (_, csv)) in tables.iter().enumerate() {
            let body = csv.as_str();
            // One header for the whole long-format table.
            text.push_str(if i == 0 { body } else { body.split_once('\n').map_or("", |b| b.1) });
        }
        emit(args.common.out.as_deref(), &text, out)?;
    }
    Ok(EXIT_OK)
}
