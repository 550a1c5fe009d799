//! Discretized Berry phase of the ground state along the rotation loop
//! `φ ↦ H_φ`, as the argument of a closed product of neighbouring overlaps.
//!
//! Each eigenvector carries an arbitrary phase from the solver; in the closed
//! product every state appears once as a bra and once as a ket, so those
//! phases cancel and the result is gauge invariant.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eigen::{ground_state, inner, GroundState};
use super::hamiltonian::{build_hamiltonian_with, check_oracle_size, ChainConvention};
use crate::error::{Error, Result};
use crate::model::{circular_distance, wrap_phase};

/// Adjacent overlaps smaller than this mean the loop is under-resolved.
pub const MIN_OVERLAP: f64 = 1e-6;
pub const MIN_LOOP_STEPS: usize = 16;

/// Range of the rotation angle `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopSpan {
    /// `φ ∈ [0, π]`: one period of the π-periodic family `H_φ`. The phase is
    /// `Σ_{k>0} Γ_k` (one term per pair).
    HalfTurn,
    /// `φ ∈ [0, 2π]`: a full rotation of every spin. The phase is
    /// `Σ_{±k} Γ_k`, twice the half-turn value.
    #[default]
    FullTurn,
}

impl LoopSpan {
    pub fn angle(self) -> f64 {
        match self {
            LoopSpan::HalfTurn => PI,
            LoopSpan::FullTurn => TAU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoopConfig {
    /// Number of links in the loop; must be even and at least 16.
    pub steps: usize,
    /// Smallest acceptable ground-state gap along the loop.
    pub degeneracy_tol: f64,
    pub span: LoopSpan,
    pub convention: ChainConvention,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self {
            steps: 1024,
            degeneracy_tol: 0.05,
            span: LoopSpan::FullTurn,
            convention: ChainConvention::Analytic,
        }
    }
}

impl LoopConfig {
    pub fn with_steps(steps: usize) -> Self {
        Self {
            steps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < MIN_LOOP_STEPS || self.steps % 2 != 0 {
            return Err(Error::domain(
                "steps",
                self.steps as f64,
                "loop needs an even number of at least 16 steps",
            ));
        }
        if !(self.degeneracy_tol > 0.0) {
            return Err(Error::domain(
                "degeneracy_tol",
                self.degeneracy_tol,
                "must be positive",
            ));
        }
        Ok(())
    }

    pub fn phi(&self, j: usize) -> f64 {
        self.span.angle() * j as f64 / self.steps as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerryLoop {
    /// Berry phase in `[0, 2π)`.
    pub phase: f64,
    /// `|γ(steps) - γ(steps/2)|` measured on the circle.
    pub convergence: f64,
    /// `|γ(steps/2) - γ(steps/4)|` from the same samples, when `steps/2` is even.
    pub previous_convergence: Option<f64>,
    /// Phase accumulated over `φ ∈ [0, π]` from the same samples.
    pub half_turn_phase: f64,
    pub min_gap: f64,
    /// `(φ, gap)` at every sample.
    pub gap_profile: Vec<(f64, f64)>,
}

/// `-arg Π ⟨ψ_j|ψ_{j+1}⟩` around the closed sequence `states`, the last state
/// linking back to the first. Result in `[0, 2π)`.
pub fn pancharatnam_phase<S: AsRef<[Complex64]>>(states: &[S]) -> Result<f64> {
    let n = states.len();
    let mut product = Complex64::new(1.0, 0.0);
    for i in 0..n {
        let next = (i + 1) % n;
        let ov = inner(states[i].as_ref(), states[next].as_ref());
        let mag = ov.norm();
        if mag < MIN_OVERLAP {
            return Err(Error::VanishingOverlap {
                index: i,
                next,
                overlap: mag,
            });
        }
        // Only the argument matters; keep the running product on the unit circle.
        product *= ov / mag;
        product /= product.norm();
    }
    Ok(wrap_phase(-product.arg()))
}

/// Ground states at `φ_j = span · j / steps` for `j = 0 ..= steps`; the
/// endpoint is diagonalized afresh rather than copied from `φ = 0`.
pub fn loop_ground_states(
    n_sites: usize,
    alpha: f64,
    field: f64,
    config: &LoopConfig,
) -> Result<Vec<GroundState>> {
    config.validate()?;
    check_oracle_size(n_sites)?;
    (0..=config.steps)
        .into_par_iter()
        .map(|j| {
            let h =
                build_hamiltonian_with(n_sites, alpha, field, config.phi(j), config.convention)?;
            Ok(ground_state(&h, config.degeneracy_tol))
        })
        .collect()
}

pub fn berry_phase_loop(
    n_sites: usize,
    alpha: f64,
    field: f64,
    config: &LoopConfig,
) -> Result<BerryLoop> {
    let states = loop_ground_states(n_sites, alpha, field, config)?;
    berry_phase_from_states(&states, config)
}

pub(crate) fn berry_phase_from_states(
    states: &[GroundState],
    config: &LoopConfig,
) -> Result<BerryLoop> {
    let gap_profile: Vec<(f64, f64)> = states
        .iter()
        .enumerate()
        .map(|(j, g)| (config.phi(j), g.gap))
        .collect();
    if let Some(&(phi, gap)) = gap_profile.iter().find(|(_, g)| *g < config.degeneracy_tol) {
        return Err(Error::Degenerate {
            phi,
            gap,
            tol: config.degeneracy_tol,
        });
    }
    let min_gap = gap_profile
        .iter()
        .map(|&(_, g)| g)
        .fold(f64::INFINITY, f64::min);

    let vectors: Vec<&[Complex64]> = states.iter().map(|g| g.vector.as_slice()).collect();
    let phase = pancharatnam_phase(&vectors)?;
    let coarse: Vec<&[Complex64]> = vectors.iter().step_by(2).copied().collect();
    let coarse_phase = pancharatnam_phase(&coarse)?;
    let previous_convergence = if config.steps % 4 == 0 {
        let coarser: Vec<&[Complex64]> = vectors.iter().step_by(4).copied().collect();
        Some(circular_distance(coarse_phase, pancharatnam_phase(&coarser)?))
    } else {
        None
    };

    let half = match config.span {
        LoopSpan::HalfTurn => phase,
        LoopSpan::FullTurn => pancharatnam_phase(&vectors[..=config.steps / 2])?,
    };

    Ok(BerryLoop {
        phase,
        convergence: circular_distance(phase, coarse_phase),
        previous_convergence,
        half_turn_phase: half,
        min_gap,
        gap_profile,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{total_phase, ChainSpec, PhaseConvention};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deep_paramagnet_has_trivial_phase() {
        let r = berry_phase_loop(3, 1.0, 1e6, &LoopConfig::with_steps(64)).unwrap();
        assert!(circular_distance(r.phase, 0.0) <= 1e-3, "{}", r.phase);
    }

    #[test]
    fn reproduces_total_phase_n3() {
        let r = berry_phase_loop(3, 1.0, 2.0, &LoopConfig::with_steps(1024)).unwrap();
        // total_phase(N=3, α=1, B=2) mod 2π, 50-digit reference.
        assert!(circular_distance(r.phase, 5.441_398_092_702_654) < 1e-3);
        let spec = ChainSpec::new(3, 1.0).unwrap();
        let positive_k = total_phase(&spec, 2.0, PhaseConvention::Raw).unwrap().total_raw / 2.0;
        assert!(circular_distance(r.half_turn_phase, positive_k) < 1e-3);
    }

    #[test]
    fn gauge_invariance() {
        let cfg = LoopConfig::with_steps(64);
        let states = loop_ground_states(5, 0.6, 1.5, &cfg).unwrap();
        let base = berry_phase_from_states(&states, &cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut twisted = states.clone();
        for g in twisted.iter_mut() {
            let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            g.vector.iter_mut().for_each(|v| *v *= z);
        }
        let other = berry_phase_from_states(&twisted, &cfg).unwrap();
        assert!(circular_distance(base.phase, other.phase) <= 1e-12);
        assert!(circular_distance(base.half_turn_phase, other.half_turn_phase) <= 1e-12);
    }

    #[test]
    fn step_doubling_converges() {
        let mut last = f64::INFINITY;
        for steps in [128, 256, 512, 1024] {
            let r = berry_phase_loop(3, 0.5, 1.5, &LoopConfig::with_steps(steps)).unwrap();
            assert!(r.convergence * 2.0 <= last, "{steps}: {} vs {last}", r.convergence);
            last = r.convergence;
        }
    }

    #[test]
    fn previous_convergence_uses_every_fourth_sample() {
        let fine = berry_phase_loop(3, 0.5, 1.5, &LoopConfig::with_steps(512)).unwrap();
        let coarse = berry_phase_loop(3, 0.5, 1.5, &LoopConfig::with_steps(256)).unwrap();
        assert!((fine.previous_convergence.unwrap() - coarse.convergence).abs() <= 1e-12);
        assert!(fine.convergence * 2.0 <= fine.previous_convergence.unwrap());
        let odd_half = berry_phase_loop(3, 0.5, 1.5, &LoopConfig::with_steps(18)).unwrap();
        assert!(odd_half.previous_convergence.is_none());
    }

    #[test]
    fn refuses_degenerate_loop() {
        let r = berry_phase_loop(5, 1.0, 0.5, &LoopConfig::with_steps(16));
        assert!(matches!(r, Err(Error::Degenerate { .. })), "{r:?}");
    }

    #[test]
    fn vanishing_overlap_is_reported() {
        let a = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let b = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert!(matches!(
            pancharatnam_phase(&[a, b]),
            Err(Error::VanishingOverlap { index: 0, next: 1, .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(LoopConfig::with_steps(8).validate().is_err());
        assert!(LoopConfig::with_steps(17).validate().is_err());
        assert!(LoopConfig::with_steps(16).validate().is_ok());
        assert_abs_diff_eq!(LoopConfig::with_steps(16).phi(16), TAU);
    }
}
