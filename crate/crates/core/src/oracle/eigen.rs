use faer::complex_native::c64;
use faer::dyn_stack::{GlobalPodBuffer, PodStack};
use faer::linalg::evd::{compute_hermitian_evd, compute_hermitian_evd_req, ComputeVectors};
use faer::{Col, Mat, Parallelism};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::SpinHamiltonian;

/// Lowest eigenpair of a spin Hamiltonian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub energy: f64,
    /// Unit-norm eigenvector in the `2^N` basis.
    pub vector: Vec<Complex64>,
    /// Distance to the first excited level.
    pub gap: f64,
    /// The gap fell below the tolerance; phases of this level are untrusted.
    pub quasi_degenerate: bool,
}

/// Dense Hermitian diagonalization, single-threaded so that callers can
/// parallelize across Hamiltonians.
pub fn ground_state(h: &SpinHamiltonian, degeneracy_tol: f64) -> GroundState {
    let m = h.matrix();
    let dim = m.nrows();
    let mut s = Col::<c64>::zeros(dim);
    let mut u = Mat::<c64>::zeros(dim, dim);
    let req = compute_hermitian_evd_req::<c64>(
        dim,
        ComputeVectors::Yes,
        Parallelism::None,
        Default::default(),
    )
    .expect("workspace size overflow");
    let mut buf = GlobalPodBuffer::new(req);
    compute_hermitian_evd(
        m.as_ref(),
        s.as_mut(),
        Some(u.as_mut()),
        Parallelism::None,
        PodStack::new(&mut buf),
        Default::default(),
    );

    // Eigenvalues come back ascending.
    let energy = s.read(0).re;
    let gap = if dim > 1 { s.read(1).re - energy } else { f64::INFINITY };
    let mut vector: Vec<Complex64> = (0..dim)
        .map(|i| {
            let z = u.read(i, 0);
            Complex64::new(z.re, z.im)
        })
        .collect();
    let norm = vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    vector.iter_mut().for_each(|z| *z /= norm);
    GroundState {
        energy,
        vector,
        gap,
        quasi_degenerate: gap < degeneracy_tol,
    }
}

/// All eigenvalues, ascending.
pub fn spectrum(h: &SpinHamiltonian) -> Vec<f64> {
    let m = h.matrix();
    let dim = m.nrows();
    let mut s = Col::<c64>::zeros(dim);
    let req = compute_hermitian_evd_req::<c64>(
        dim,
        ComputeVectors::No,
        Parallelism::None,
        Default::default(),
    )
    .expect("workspace size overflow");
    let mut buf = GlobalPodBuffer::new(req);
    compute_hermitian_evd(
        m.as_ref(),
        s.as_mut(),
        None,
        Parallelism::None,
        PodStack::new(&mut buf),
        Default::default(),
    );
    (0..dim).map(|i| s.read(i).re).collect()
}

/// `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::super::hamiltonian::build_hamiltonian;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn strong_field_ground_state_is_all_down() {
        let h = build_hamiltonian(3, 1.0, 1e6, 0.0).unwrap();
        let g = ground_state(&h, 0.05);
        // All spins anti-aligned with +B σz: every bit set.
        assert!(g.vector[7].norm_sqr() >= 1.0 - 1e-6);
        assert!(!g.quasi_degenerate);
    }

    #[test]
    fn eigenpair_residual() {
        for (n, a, b, phi) in [(3, 1.0, 2.0, 0.3), (5, 0.5, 1.5, 1.9), (7, 1.0, 0.8, 0.0)] {
            let h = build_hamiltonian(n, a, b, phi).unwrap();
            let g = ground_state(&h, 0.05);
            let hv = h.apply(&g.vector);
            let resid: f64 = hv
                .iter()
                .zip(&g.vector)
                .map(|(x, v)| (x - v * g.energy).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(resid <= 1e-10, "residual {resid}");
            assert_abs_diff_eq!(inner(&g.vector, &g.vector).re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn ferromagnetic_side_is_quasi_degenerate() {
        let h = build_hamiltonian(5, 1.0, 0.5, 0.0).unwrap();
        let g = ground_state(&h, 0.05);
        assert!(g.quasi_degenerate);
        // Observed with this solver; the splitting is exponentially small in N.
        assert_abs_diff_eq!(g.gap, 1.540e-2, epsilon = 1e-4);
    }

    #[test]
    fn spectrum_is_rotation_invariant() {
        let s0 = spectrum(&build_hamiltonian(5, 0.7, 1.2, 0.0).unwrap());
        for phi in [0.3, 1.7, 2.9, 5.5] {
            let s = spectrum(&build_hamiltonian(5, 0.7, 1.2, phi).unwrap());
            for (a, b) in s0.iter().zip(&s) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }
}
