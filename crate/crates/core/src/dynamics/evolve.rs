use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::integrator::{integrate, IntegrationStats, StepControl};
use super::pair::ModeState;
use crate::error::{Error, Result};
use crate::model::QuenchSchedule;

/// Norm drift beyond this is reported as an accuracy failure.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Smallest accepted starting field; the evolution must begin deep in the paramagnet.
pub const MIN_START_FIELD: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Field at which evolution starts; `t_start = -start_field · τ_q`.
    pub start_field: f64,
    /// Step cap in time units; `None` means `τ_q / 100`.
    pub max_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-10,
            start_field: MIN_START_FIELD,
            max_step: None,
            max_steps: 50_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain("rel_tol", self.rel_tol, "must be positive"));
        }
        if !(self.abs_tol > 0.0) {
            return Err(Error::domain("abs_tol", self.abs_tol, "must be positive"));
        }
        if !(self.start_field >= MIN_START_FIELD) {
            return Err(Error::domain(
                "start_field",
                self.start_field,
                "evolution must start at B >= 5",
            ));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::domain("max_step", h, "must be positive"));
            }
        }
        Ok(())
    }

    fn step_control(&self, schedule: &QuenchSchedule) -> StepControl {
        StepControl {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step.unwrap_or(schedule.tau_q() / 100.0),
            max_steps: self.max_steps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    pub state: ModeState,
    pub stats: IntegrationStats,
    /// `| |ψ|² - 1 |` at the end of the quench.
    pub norm_drift: f64,
}

/// Evolves one pair from the ground state at `B = start_field` to `t = 0`.
pub fn evolve_mode(
    k: f64,
    alpha: f64,
    schedule: &QuenchSchedule,
    config: &IntegratorConfig,
) -> Result<ModeState> {
    evolve_mode_detailed(k, alpha, schedule, config).map(|e| e.state)
}

/// `∫ sqrt(x² + a²) dx`.
fn gap_antiderivative(x: f64, a: f64) -> f64 {
    if a == 0.0 {
        0.5 * x * x.abs()
    } else {
        0.5 * (x * x.hypot(a) + a * a * (x / a.abs()).asinh())
    }
}

/// Integrates `i dψ/dt = H_k(t) ψ` in the adiabatic frame: `ψ` is expanded on
/// the instantaneous levels with the dynamical phases `e^{±iΦ(t)}` factored
/// out, `Φ(t) = ∫ 2Λ_k dt` in closed form. The amplitudes obey
///
/// ```text
/// ċ_g = -(θ̇/2) e^{-2iΦ} c_e,    ċ_e = (θ̇/2) e^{2iΦ} c_g,    θ̇ = -α sin k / (τ_q Λ_k²)
/// ```
///
/// which is the same Schrödinger equation with a generator that vanishes away
/// from the avoided crossing.
pub fn evolve_mode_detailed(
    k: f64,
    alpha: f64,
    schedule: &QuenchSchedule,
    config: &IntegratorConfig,
) -> Result<Evolution> {
    config.validate()?;
    let t_start = schedule.time_at_field(config.start_field);
    let tau = schedule.tau_q();
    let (cos_k, coupling) = (k.cos(), alpha * k.sin());
    let field = |t: f64| if t < 0.0 { -t / tau } else { 0.0 };
    let f0 = gap_antiderivative(config.start_field - cos_k, coupling);
    let dynamical = |b: f64| 2.0 * tau * (f0 - gap_antiderivative(b - cos_k, coupling));

    let rhs = |t: f64, c: &[Complex64; 2]| {
        let b = field(t);
        let x = b - cos_k;
        let lam2 = x * x + coupling * coupling;
        let half_rate = if t < 0.0 { -0.5 * coupling / (tau * lam2) } else { 0.0 };
        let rot = Complex64::from_polar(half_rate, 2.0 * dynamical(b));
        [-c[1] * rot.conj(), c[0] * rot]
    };

    let c0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let (c, stats) = integrate(rhs, t_start, 0.0, c0, &config.step_control(schedule))?;
    let norm_drift = (c[0].norm_sqr() + c[1].norm_sqr() - 1.0).abs();
    if norm_drift > NORM_DRIFT_LIMIT {
        return Err(Error::NormDrift {
            drift: norm_drift,
            limit: NORM_DRIFT_LIMIT,
        });
    }
    let phase = Complex64::from_polar(1.0, dynamical(0.0));
    Ok(Evolution {
        state: ModeState {
            amp_ground: c[0] * phase,
            amp_excited: c[1] * phase.conj(),
            t: 0.0,
        },
        stats,
        norm_drift,
    })
}
