//! Classical fixed-step RK4 for scalar ODEs, with step halving until two
//! successive resolutions agree. Used only as an independent reference for
//! the closed-form photon-number dynamics.

use crate::error::{OttoError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeSolution {
    pub value: f64,
    pub steps: usize,
    /// Difference between the last two resolutions.
    pub error: f64,
}

fn rk4_fixed<F: Fn(f64, f64) -> f64>(f: &F, y0: f64, t0: f64, t1: f64, steps: usize) -> f64 {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    y
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1`, doubling the step count
/// from `initial_steps` until successive results differ by at most `tol`.
///
/// The returned value is Richardson-extrapolated from the final pair.
pub fn integrate<F: Fn(f64, f64) -> f64>(
    f: F,
    y0: f64,
    t0: f64,
    t1: f64,
    initial_steps: usize,
    tol: f64,
) -> Result<OdeSolution> {
    let mut steps = initial_steps.max(1);
    let mut coarse = rk4_fixed(&f, y0, t0, t1, steps);
    for _ in 0..24 {
        steps *= 2;
        let fine = rk4_fixed(&f, y0, t0, t1, steps);
        let error = (fine - coarse).abs();
        if error <= tol {
            return Ok(OdeSolution {
                value: fine + (fine - coarse) / 15.0,
                steps,
                error,
            });
        }
        coarse = fine;
    }
    Err(OttoError::Domain(format!(
        "RK4 did not reach tolerance {tol:e} with {steps} steps"
    )))
}
