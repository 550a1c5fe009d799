//! Kibble–Zurek exponent from a log–log least-squares fit.

use serde::{Deserialize, Serialize};

use super::evolve::IntegratorConfig;
use super::kinks::{kink_count, KinkMethod};
use crate::error::{Error, Result};
use crate::model::{adiabatic_threshold, ChainSpec, QuenchSchedule};
use crate::summation::CompensatedSum;

pub const MIN_FIT_SAMPLES: usize = 5;
pub const MIN_FIT_DECADES: f64 = 1.5;
/// Faster ramps are not slow passages and fall outside Landau–Zener asymptotics.
pub const MIN_SCALING_TAU_Q: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Slope of `ln y` against `ln x`.
    pub exponent: f64,
    /// Intercept, so that `y ≈ exp(log_prefactor) · x^exponent`.
    pub log_prefactor: f64,
    /// Root-mean-square residual in `ln y`.
    pub residual: f64,
    pub samples: usize,
}

/// Least-squares fit of `ln y = a + b ln x`.
///
/// Points are sorted by `x` before accumulation, so the result does not
/// depend on input order.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least two points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Fit(format!(
            "non-positive sample ({x}, {y}) has no logarithm"
        )));
    }
    let mut logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    logs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n = logs.len() as f64;
    let mean = |f: fn(&(f64, f64)) -> f64| logs.iter().map(f).sum::<CompensatedSum>().value() / n;
    let mx = mean(|p| p.0);
    let my = mean(|p| p.1);
    let sxx: CompensatedSum = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: CompensatedSum = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx = sxx.value();
    if !(sxx > 1e-24) {
        return Err(Error::Fit("abscissae are degenerate".into()));
    }
    let exponent = sxy.value() / sxx;
    let log_prefactor = my - exponent * mx;
    let rss: CompensatedSum = logs
        .iter()
        .map(|p| (p.1 - log_prefactor - exponent * p.0).powi(2))
        .sum();
    Ok(PowerLawFit {
        exponent,
        log_prefactor,
        residual: (rss.value() / n).sqrt(),
        samples: logs.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub tau_q: f64,
    pub kink_count: f64,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub points: Vec<ScalingPoint>,
    pub fit: PowerLawFit,
    pub method: KinkMethod,
}

/// Check the preconditions of a scaling sweep over `tau_q`.
pub fn check_scaling_samples(spec: &ChainSpec, tau_q: &[f64]) -> Result<()> {
    if tau_q.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "insufficient samples: {} (need at least {MIN_FIT_SAMPLES})",
            tau_q.len()
        )));
    }
    let upper = adiabatic_threshold(spec.n_sites());
    for &t in tau_q {
        if !(MIN_SCALING_TAU_Q..upper).contains(&t) {
            return Err(Error::Fit(format!(
                "tau_q = {t} outside the Landau-Zener scaling regime [{MIN_SCALING_TAU_Q}, {upper})"
            )));
        }
    }
    let (lo, hi) = tau_q
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &t| (lo.min(t), hi.max(t)));
    let decades = (hi / lo).log10();
    if decades < MIN_FIT_DECADES {
        return Err(Error::Fit(format!(
            "samples span {decades:.3} decades (need at least {MIN_FIT_DECADES})"
        )));
    }
    Ok(())
}

/// Kink density over a set of quench times and its fitted power law.
pub fn scaling_fit(
    spec: &ChainSpec,
    tau_q: &[f64],
    method: KinkMethod,
    config: &IntegratorConfig,
) -> Result<ScalingFit> {
    check_scaling_samples(spec, tau_q)?;
    let points = tau_q
        .iter()
        .map(|&t| {
            let r = kink_count(spec, &QuenchSchedule::new(t)?, method, config)?;
            Ok(ScalingPoint {
                tau_q: t,
                kink_count: r.kink_count,
                density: r.density,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.tau_q, p.density)).collect();
    Ok(ScalingFit {
        fit: fit_power_law(&xy)?,
        points,
        method,
    })
}

/// `count` points log-spaced from `lo` to `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.log10(), hi.log10());
            (0..count)
                .map(|i| {
                    if i == count - 1 {
                        hi
                    } else {
                        10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64)
                    }
                })
                .collect()
        }
    }
}
