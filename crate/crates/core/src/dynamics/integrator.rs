//! Dormand–Prince 5(4) with adaptive step control for small complex systems.
//!
//! The solver is specialised to fixed-size complex state vectors, which is
//! all the two-level mode dynamics needs. The error norm treats the real and
//! imaginary parts of each component as separate unknowns.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegrationStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 10.0;

type State<const D: usize> = [Complex64; D];

fn combine<const D: usize>(y: &State<D>, h: f64, terms: &[(f64, &State<D>)]) -> State<D> {
    let mut out = *y;
    for &(w, k) in terms {
        if w == 0.0 {
            continue;
        }
        for (o, ki) in out.iter_mut().zip(k) {
            *o += ki * (h * w);
        }
    }
    out
}

/// Integrates `dy/dt = rhs(t, y)` from `t0` to `t1 > t0`.
pub fn integrate<const D: usize, F>(
    rhs: F,
    t0: f64,
    t1: f64,
    y0: State<D>,
    control: &StepControl,
) -> Result<(State<D>, IntegrationStats)>
where
    F: Fn(f64, &State<D>) -> State<D>,
{
    assert!(t1 > t0, "integration interval must be forward in time");
    let mut stats = IntegrationStats::default();
    let span = t1 - t0;
    let h_max = control.max_step.min(span);
    let h_min = 16.0 * f64::EPSILON * t0.abs().max(t1.abs()).max(1.0);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = rhs(t, &y);
    stats.evaluations += 1;
    let mut h = initial_step(&y, &k1, control).min(h_max);

    while t < t1 {
        if stats.accepted + stats.rejected >= control.max_steps {
            return Err(Error::TooManySteps(control.max_steps));
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }

        let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            t + C4 * h,
            &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            t + C5 * h,
            &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &combine(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = combine(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let t_new = if last { t1 } else { t + h };
        let k7 = rhs(t_new, &y_new);
        stats.evaluations += 6;

        let mut acc = 0.0;
        for i in 0..D {
            let err = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6
                + k7[i] * E7)
                * h;
            let scale_re = control.abs_tol + control.rel_tol * y[i].re.abs().max(y_new[i].re.abs());
            let scale_im = control.abs_tol + control.rel_tol * y[i].im.abs().max(y_new[i].im.abs());
            acc += (err.re / scale_re).powi(2) + (err.im / scale_im).powi(2);
        }
        let err_norm = (acc / (2 * D) as f64).sqrt();

        if err_norm <= 1.0 {
            stats.accepted += 1;
            t = t_new;
            y = y_new;
            k1 = k7;
            let factor = if err_norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            h = (h * factor).min(h_max);
        } else {
            stats.rejected += 1;
            h *= (SAFETY * err_norm.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
            if h < h_min {
                return Err(Error::StepUnderflow { t, step: h });
            }
        }
    }
    Ok((y, stats))
}

fn initial_step<const D: usize>(y: &State<D>, f: &State<D>, control: &StepControl) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (yi, fi) in y.iter().zip(f) {
        let scale = control.abs_tol + control.rel_tol * yi.norm();
        d0 += (yi.norm() / scale).powi(2);
        d1 += (fi.norm() / scale).powi(2);
    }
    let (d0, d1) = (d0.sqrt(), d1.sqrt());
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn control(tol: f64) -> StepControl {
        StepControl {
            rel_tol: tol,
            abs_tol: tol,
            max_step: 1.0,
            max_steps: 1_000_000,
        }
    }

    #[test]
    fn harmonic_phase() {
        // y' = -iωy has y(t) = exp(-iωt).
        let w = 3.0;
        let (y, stats) = integrate(
            |_, y: &[Complex64; 1]| [y[0] * Complex64::new(0.0, -w)],
            0.0,
            10.0,
            [Complex64::new(1.0, 0.0)],
            &control(1e-10),
        )
        .unwrap();
        let exact = Complex64::from_polar(1.0, -w * 10.0);
        assert_abs_diff_eq!((y[0] - exact).norm(), 0.0, epsilon = 1e-8);
        assert!(stats.accepted > 0);
    }

    #[test]
    fn fifth_order_convergence() {
        // y' = t^4 is integrated exactly by a 5th-order method.
        let (y, _) = integrate(
            |t, _: &[Complex64; 1]| [Complex64::new(t.powi(4), 0.0)],
            0.0,
            2.0,
            [Complex64::new(0.0, 0.0)],
            &control(1e-6),
        )
        .unwrap();
        assert_abs_diff_eq!(y[0].re, 32.0 / 5.0, epsilon = 1e-10);
    }

    #[test]
    fn step_budget_is_enforced() {
        let mut c = control(1e-12);
        c.max_steps = 10;
        let r = integrate(
            |_, y: &[Complex64; 1]| [y[0] * Complex64::new(0.0, -50.0)],
            0.0,
            100.0,
            [Complex64::new(1.0, 0.0)],
            &c,
        );
        assert!(matches!(r, Err(Error::TooManySteps(10))));
    }
}
