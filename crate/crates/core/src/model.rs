//! Static and instantaneous closed-form quantities of the XY chain.
//!
//! The chain has `N = 2M + 1` sites and, after fermionization, decouples into
//! `(k, -k)` pairs on the half-integer momentum grid `k_j = (2j - 1)π/N`. Each
//! pair is a two-level system whose ground state sits at Bogoliubov angle
//! `θ_k` with `cos θ_k = (cos k - B) / Λ_k`; its geometric phase for a closed
//! rotation about the field axis is `Γ_k = π(1 - cos θ_k)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Below this gap a mode is treated as sitting on a level crossing.
pub const GAP_FLOOR: f64 = 1e-12;

/// Multiple of `N²/(2π³)` a quench time must clear to count as adiabatic.
pub const ADIABATIC_MARGIN: f64 = 10.0;

/// Static description of the chain: odd site count and anisotropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n_sites: usize,
    alpha: f64,
}

impl ChainSpec {
    pub fn new(n_sites: usize, alpha: f64) -> Result<Self> {
        if n_sites < 3 || n_sites % 2 == 0 {
            return Err(Error::domain(
                "N",
                n_sites as f64,
                "site count must be odd and at least 3",
            ));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain("alpha", alpha, "anisotropy must lie in [0, 1]"));
        }
        Ok(Self { n_sites, alpha })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Number of `(k, -k)` pairs, `M = (N - 1)/2`.
    pub fn pair_count(&self) -> usize {
        (self.n_sites - 1) / 2
    }
}

/// Linear ramp `B(t) = -t/τ_q`, switched off at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuenchSchedule {
    tau_q: f64,
}

impl QuenchSchedule {
    pub fn new(tau_q: f64) -> Result<Self> {
        if !(tau_q > 0.0 && tau_q.is_finite()) {
            return Err(Error::domain("tau_q", tau_q, "quench time must be positive"));
        }
        Ok(Self { tau_q })
    }

    pub fn tau_q(&self) -> f64 {
        self.tau_q
    }

    pub fn field_at(&self, t: f64) -> f64 {
        field_at(t, self)
    }

    /// Time at which the ramp passes through `field`.
    pub fn time_at_field(&self, field: f64) -> f64 {
        -field * self.tau_q
    }
}

/// Positive half of the momentum grid, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeGrid {
    momenta: Vec<f64>,
}

impl ModeGrid {
    /// `k_j = (2j - 1)π/N` for `j = 1 ..= (N - 1)/2`.
    pub fn half_integer(spec: &ChainSpec) -> Self {
        let n = spec.n_sites() as f64;
        let momenta = (1..=spec.pair_count())
            .map(|j| (2 * j - 1) as f64 * PI / n)
            .collect();
        Self { momenta }
    }

    /// Arbitrary grid, for tests that probe off-grid momenta.
    pub fn custom(mut momenta: Vec<f64>) -> Result<Self> {
        if let Some(&bad) = momenta.iter().find(|k| !(**k > 0.0 && **k < PI)) {
            return Err(Error::domain("k", bad, "custom momenta must lie in (0, pi)"));
        }
        momenta.sort_by(f64::total_cmp);
        Ok(Self { momenta })
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn len(&self) -> usize {
        self.momenta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.momenta.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.momenta.iter().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// Value as produced by `π(1 - cos θ)`, in `[0, 2π]`.
    #[default]
    Raw,
    /// Reduced to `[0, 2π)`.
    Mod2Pi,
}

impl PhaseConvention {
    pub fn apply(self, phase: f64) -> f64 {
        match self {
            PhaseConvention::Raw => phase,
            PhaseConvention::Mod2Pi => wrap_phase(phase),
        }
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn wrap_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles measured on the circle, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_phase(a - b);
    d.min(TAU - d)
}

/// Per-mode and total geometric phases of one many-body state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseReport {
    /// `(k, Γ_k)` over the positive grid, under `convention`.
    pub per_mode: Vec<(f64, f64)>,
    /// Raw phases summed over the full `±k` grid.
    pub total_raw: f64,
    /// `total_raw` reduced to `[0, 2π)`.
    pub total_mod: f64,
    pub convention: PhaseConvention,
}

impl PhaseReport {
    /// Builds a report from raw positive-k phases; `Γ_{-k} = Γ_k` doubles the sum.
    pub(crate) fn from_raw(raw: Vec<(f64, f64)>, convention: PhaseConvention) -> Self {
        let half: CompensatedSum = raw.iter().map(|&(_, g)| g).sum();
        let total_raw = 2.0 * half.value();
        let per_mode = raw
            .into_iter()
            .map(|(k, g)| (k, convention.apply(g)))
            .collect();
        Self {
            per_mode,
            total_raw,
            total_mod: wrap_phase(total_raw),
            convention,
        }
    }

    /// Total under the report's own convention.
    pub fn total(&self) -> f64 {
        match self.convention {
            PhaseConvention::Raw => self.total_raw,
            PhaseConvention::Mod2Pi => self.total_mod,
        }
    }
}

/// Berry phase `π(1 - cos θ)` of a spin-1/2 aligned with a field at polar
/// angle `theta` that precesses once around the z-axis. The anti-aligned
/// state picks up the negative.
pub fn single_spin_phase(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::domain("theta", theta, "polar angle must lie in [0, pi]"));
    }
    Ok(PI * (1.0 - theta.cos()))
}

pub fn momentum_grid(spec: &ChainSpec) -> ModeGrid {
    ModeGrid::half_integer(spec)
}

/// `Λ_k = sqrt((cos k - B)² + α² sin² k)`.
pub fn energy_gap(k: f64, field: f64, alpha: f64) -> f64 {
    (k.cos() - field).hypot(alpha * k.sin())
}

/// `cos θ_k = (cos k - B)/Λ_k`.
pub fn bogoliubov_angle_cos(k: f64, field: f64, alpha: f64) -> Result<f64> {
    let gap = energy_gap(k, field, alpha);
    if !(gap > GAP_FLOOR) {
        return Err(Error::Gapless { k, field, alpha });
    }
    Ok(((k.cos() - field) / gap).clamp(-1.0, 1.0))
}

/// `Γ_k = π(1 - cos θ_k)` at field `B`.
pub fn mode_phase(k: f64, field: f64, alpha: f64, convention: PhaseConvention) -> Result<f64> {
    let c = bogoliubov_angle_cos(k, field, alpha)?;
    Ok(convention.apply(PI * (1.0 - c)))
}

/// Phase of the instantaneous ground state at field `B`, summed over `±k`.
pub fn total_phase(
    spec: &ChainSpec,
    field: f64,
    convention: PhaseConvention,
) -> Result<PhaseReport> {
    let raw = ModeGrid::half_integer(spec)
        .iter()
        .map(|k| Ok((k, mode_phase(k, field, spec.alpha(), PhaseConvention::Raw)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseReport::from_raw(raw, convention))
}

/// `B(t) = -t/τ_q` for `t < 0`, zero afterwards.
pub fn field_at(t: f64, schedule: &QuenchSchedule) -> f64 {
    if t < 0.0 {
        -t / schedule.tau_q()
    } else {
        0.0
    }
}

/// `Γ_k(t)` along the quench.
pub fn mode_phase_at_time(
    k: f64,
    t: f64,
    schedule: &QuenchSchedule,
    alpha: f64,
    convention: PhaseConvention,
) -> Result<f64> {
    mode_phase(k, field_at(t, schedule), alpha, convention)
}

/// Critical-point phase `π(1 - (cos k + 1)/sqrt((cos k + 1)² + α² sin² k))`.
///
/// This is the customary closed form for the instant `t = -τ_q`. Note that it
/// carries `cos k + 1`, so it coincides with `Γ_k` at `B = -1`; the
/// time-dependent phase at `B = 1` is `mode_phase_at_time(k, -τ_q, ..)`.
pub fn critical_mode_phase(k: f64, alpha: f64) -> Result<f64> {
    mode_phase(k, -1.0, alpha, PhaseConvention::Raw)
}

/// `N²/(2π³)`: quench times well above this excite at most the lowest pair.
pub fn adiabatic_threshold(n_sites: usize) -> f64 {
    let n = n_sites as f64;
    n * n / (2.0 * PI.powi(3))
}

/// Whether `tau_q` clears [`ADIABATIC_MARGIN`] times the adiabatic threshold.
pub fn is_adiabatic(n_sites: usize, tau_q: f64) -> bool {
    tau_q >= ADIABATIC_MARGIN * adiabatic_threshold(n_sites)
}
