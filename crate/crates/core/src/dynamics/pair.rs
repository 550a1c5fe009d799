//! Two-level Hamiltonian of one `(k, -k)` pair in the `{|00⟩, |11⟩}` basis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::model::energy_gap;

/// Real symmetric 2×2 matrix, row-major.
pub type Matrix2 = [[f64; 2]; 2];

/// `H_k = 2[[B - cos k, α sin k], [α sin k, cos k - B]]`.
///
/// The factor two is the pair-creation energy of the spin chain whose
/// dispersion is `Λ_k`; with it the eigenvalues are `±2Λ_k` and a linear
/// sweep reproduces the Landau–Zener exponent `2πτ_q α² sin² k`.
pub fn mode_hamiltonian(k: f64, field: f64, alpha: f64) -> Matrix2 {
    let d = 2.0 * (field - k.cos());
    let o = 2.0 * alpha * k.sin();
    [[d, o], [o, -d]]
}

/// Eigenvalues of [`mode_hamiltonian`], ascending.
pub fn mode_levels(k: f64, field: f64, alpha: f64) -> [f64; 2] {
    let g = 2.0 * energy_gap(k, field, alpha);
    [-g, g]
}

/// Bloch angle `θ` of the ground level, `cos θ = (cos k - B)/Λ_k`.
///
/// With no coupling (`α sin k = 0`) the levels cross rather than avoid each
/// other; the angle then stays on the branch the evolution starts from
/// (`θ = π`, large positive field), which labels levels by continuity.
pub fn ground_angle(k: f64, field: f64, alpha: f64) -> f64 {
    let coupling = alpha * k.sin();
    if coupling == 0.0 {
        std::f64::consts::PI
    } else {
        coupling.atan2(k.cos() - field)
    }
}

/// Instantaneous ground and excited eigenvectors `(cos θ/2, -sin θ/2)` and
/// `(sin θ/2, cos θ/2)`.
pub fn mode_eigenvectors(k: f64, field: f64, alpha: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = (0.5 * ground_angle(k, field, alpha)).sin_cos();
    ([c, -s], [s, c])
}

/// Amplitudes of a pair state on its instantaneous levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeState {
    pub amp_ground: Complex64,
    pub amp_excited: Complex64,
    pub t: f64,
}

impl ModeState {
    pub fn norm_sqr(&self) -> f64 {
        self.amp_ground.norm_sqr() + self.amp_excited.norm_sqr()
    }

    pub fn excitation_probability(&self) -> f64 {
        self.amp_excited.norm_sqr()
    }

    /// Project a state given in the `{|00⟩, |11⟩}` basis onto the levels at `field`.
    pub fn project(psi: &[Complex64; 2], k: f64, field: f64, alpha: f64, t: f64) -> Self {
        let (g, e) = mode_eigenvectors(k, field, alpha);
        Self {
            amp_ground: psi[0] * g[0] + psi[1] * g[1],
            amp_excited: psi[0] * e[0] + psi[1] * e[1],
            t,
        }
    }
}
