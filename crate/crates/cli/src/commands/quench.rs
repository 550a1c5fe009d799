use std::io::Write;

use berryquench_core::dynamics::{final_phase_excluding, final_phase_one_pair, kink_count_with};
use berryquench_core::model::{adiabatic_threshold, is_adiabatic, ADIABATIC_MARGIN};
use berryquench_core::{
    DefectReport, IntegratorConfig, KinkMethod, PairCounting, PhaseConvention, PhaseReport,
};
use serde::Serialize;

use super::{chain, schedule};
use crate::args::QuenchArgs;
use crate::output::{emit, to_json};
use crate::{CliResult, EXIT_OK, SCHEMA_VERSION};

pub const ROUNDING_RULE: &str = "defect_pairs = kink_count per (k, -k) pair rounded to the nearest \
integer (halves away from zero), capped at (N - 1)/2; the lowest-|k| pairs are excluded";

#[derive(Debug, Serialize)]
pub struct FinalPhase {
    /// `one_pair` inside the adiabatic margin, `defects` otherwise.
    pub formula: &'static str,
    pub defect_pairs: usize,
    pub rounding: &'static str,
    pub report: PhaseReport,
}

#[derive(Debug, Serialize)]
pub struct CrossCheck {
    pub analytic_lz: f64,
    pub numeric_ode: f64,
    /// `|numeric - analytic| / analytic`; null when the analytic count is 0
    /// and the numeric one is not.
    pub relative_difference: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct QuenchReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n_sites: usize,
    pub alpha: f64,
    pub tau_q: f64,
    pub defects: DefectReport,
    pub adiabatic_threshold: f64,
    pub adiabatic_margin: f64,
    pub adiabatic: bool,
    pub final_phase: FinalPhase,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

fn pair_kinks(report: &DefectReport) -> f64 {
    match report.counting {
        PairCounting::PositiveK => report.kink_count,
        PairCounting::BothSigns => report.kink_count / 2.0,
    }
}

pub fn relative_difference(reference: f64, value: f64) -> Option<f64> {
    if reference == value {
        Some(0.0)
    } else if reference == 0.0 {
        None
    } else {
        Some(((value - reference) / reference).abs())
    }
}

pub fn build_report(args: &QuenchArgs) -> CliResult<QuenchReport> {
    let spec = chain(args.n, args.alpha)?;
    let sched = schedule(args.tau_q)?;
    let method: KinkMethod = args.method.into();
    let counting: PairCounting = args.counting.into();
    let convention: PhaseConvention = args.convention.into();
    let config = IntegratorConfig::default();

    let defects = kink_count_with(&spec, &sched, method, &config, counting)?;
    let adiabatic = is_adiabatic(spec.n_sites(), sched.tau_q());
    let final_phase = if adiabatic {
        FinalPhase {
            formula: "one_pair",
            defect_pairs: 1,
            rounding: ROUNDING_RULE,
            report: final_phase_one_pair(&spec, convention)?,
        }
    } else {
        let pairs = (pair_kinks(&defects).round() as usize).min(spec.pair_count());
        FinalPhase {
            formula: "defects",
            defect_pairs: pairs,
            rounding: ROUNDING_RULE,
            report: final_phase_excluding(&spec, pairs, convention)?,
        }
    };

    let cross_check = if args.cross_check {
        let other = match method {
            KinkMethod::AnalyticLz => KinkMethod::NumericOde,
            KinkMethod::NumericOde => KinkMethod::AnalyticLz,
        };
        let second = kink_count_with(&spec, &sched, other, &config, counting)?;
        let (a, n) = match method {
            KinkMethod::AnalyticLz => (defects.kink_count, second.kink_count),
            KinkMethod::NumericOde => (second.kink_count, defects.kink_count),
        };
        Some(CrossCheck {
            analytic_lz: a,
            numeric_ode: n,
            relative_difference: relative_difference(a, n),
        })
    } else {
        None
    };

    Ok(QuenchReport {
        schema_version: SCHEMA_VERSION,
        command: "quench",
        n_sites: spec.n_sites(),
        alpha: spec.alpha(),
        tau_q: sched.tau_q(),
        defects,
        adiabatic_threshold: adiabatic_threshold(spec.n_sites()),
        adiabatic_margin: ADIABATIC_MARGIN,
        adiabatic,
        final_phase,
        cross_check,
    })
}

pub fn run(args: &QuenchArgs, out: &mut dyn Write, _err: &mut dyn Write) -> CliResult<i32> {
    let report = build_report(args)?;
    emit(args.common.out.as_deref(), &to_json(&report)?, out)?;
    Ok(EXIT_OK)
}
