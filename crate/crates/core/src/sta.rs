//! Shortcut-to-adiabaticity frequency ramps and their energy cost.
//!
//! The ramp is the 10-15-6 quintic between `ω_i` and `ω_f`, whose first and
//! second derivatives vanish at both ends. The cost of the counterdiabatic
//! term is taken as
//!
//! `V(τ) = (n̄(0)/τ) ∫₀^τ ω (ω̈/(4ω³) - ω̇²/(4ω⁴)) dt`
//!
//! and integrated numerically over physical ramp time.

use serde::{Deserialize, Serialize};

use crate::error::{OttoError, Result};
use crate::quadrature::{integrate_adaptive, GaussLegendre, Tolerance};

/// Points used to confirm `ω(t) > 0` along a ramp.
const POSITIVITY_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyProtocol {
    pub omega_i: f64,
    pub omega_f: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RampPoint {
    pub omega: f64,
    pub omega_dot: f64,
    pub omega_ddot: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stroke {
    Expansion,
    Compression,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StaCost {
    pub v: f64,
    pub stroke: Stroke,
    pub nbar0: f64,
    /// Quadrature error estimate carried into `v`.
    pub error: f64,
}

impl FrequencyProtocol {
    pub fn new(omega_i: f64, omega_f: f64, tau: f64) -> Result<Self> {
        if !(omega_i > 0.0 && omega_f > 0.0) || !omega_i.is_finite() || !omega_f.is_finite() {
            return Err(OttoError::Protocol(format!(
                "frequencies must be positive, got {omega_i} -> {omega_f}"
            )));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(OttoError::Protocol(format!("ramp duration must be positive, got {tau}")));
        }
        let p = Self { omega_i, omega_f, tau };
        p.check_positive()?;
        Ok(p)
    }

    fn check_positive(&self) -> Result<()> {
        for k in 0..=POSITIVITY_SAMPLES {
            let u = k as f64 / POSITIVITY_SAMPLES as f64;
            let w = self.omega_i + (self.omega_f - self.omega_i) * smoothstep(u);
            if !(w > 0.0) {
                return Err(OttoError::Protocol(format!("omega({}) = {w} <= 0", u * self.tau)));
            }
        }
        Ok(())
    }

    pub fn stroke(&self) -> Stroke {
        if self.omega_f < self.omega_i {
            Stroke::Expansion
        } else {
            Stroke::Compression
        }
    }

    /// Value and analytic derivatives at `t` without range checks.
    fn eval(&self, t: f64) -> RampPoint {
        let u = t / self.tau;
        let d = self.omega_f - self.omega_i;
        let u2 = u * u;
        RampPoint {
            omega: self.omega_i + d * smoothstep(u),
            omega_dot: d * 30.0 * u2 * (1.0 - u) * (1.0 - u) / self.tau,
            omega_ddot: d * 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) / (self.tau * self.tau),
        }
    }

    /// `ω(t)`, `ω̇(t)`, `ω̈(t)` for `0 <= t <= τ`.
    pub fn omega_at(&self, t: f64) -> Result<RampPoint> {
        if !(0.0..=self.tau).contains(&t) {
            return Err(OttoError::Domain(format!("t = {t} outside [0, {}]", self.tau)));
        }
        Ok(self.eval(t))
    }

    /// Coefficient of `x²` in the counterdiabatic Hamiltonian,
    /// `(1/2)(ω̈/(2ω) - 3ω̇²/(4ω²))`.
    pub fn counterdiabatic_coefficient(&self, t: f64) -> Result<f64> {
        let p = self.omega_at(t)?;
        Ok(0.5 * (p.omega_ddot / (2.0 * p.omega) - 0.75 * p.omega_dot * p.omega_dot / (p.omega * p.omega)))
    }

    /// Integrand of the cost integral at `t`.
    pub fn cost_integrand(&self, t: f64) -> f64 {
        let p = self.eval(t);
        let w = p.omega;
        w * (p.omega_ddot / (4.0 * w * w * w) - p.omega_dot * p.omega_dot / (4.0 * w * w * w * w))
    }
}

/// `10u³ - 15u⁴ + 6u⁵`.
#[inline]
fn smoothstep(u: f64) -> f64 {
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Energy cost of the ramp for a state starting with `nbar0` photons.
pub fn sta_cost(protocol: &FrequencyProtocol, nbar0: f64) -> Result<StaCost> {
    sta_cost_with(protocol, nbar0, Tolerance::default())
}

pub fn sta_cost_with(protocol: &FrequencyProtocol, nbar0: f64, tol: Tolerance) -> Result<StaCost> {
    if !(nbar0 >= 0.0) {
        return Err(OttoError::InvalidInput(format!("nbar0 = {nbar0} must be >= 0")));
    }
    let q = integrate_adaptive(|t| protocol.cost_integrand(t), 0.0, protocol.tau, tol)?;
    // nbar0 multiplies last so that V is exactly linear in it.
    Ok(StaCost {
        v: nbar0 * (q.value / protocol.tau),
        stroke: protocol.stroke(),
        nbar0,
        error: nbar0 * (q.error / protocol.tau),
    })
}

/// Same cost integral by a composite fixed-order Gauss–Legendre rule.
pub fn sta_cost_fixed_rule(protocol: &FrequencyProtocol, nbar0: f64, order: usize, panels: usize) -> f64 {
    let rule = GaussLegendre::new(order);
    let q = rule.integrate(|t| protocol.cost_integrand(t), 0.0, protocol.tau, panels);
    nbar0 * (q / protocol.tau)
}

/// Cost per photon at unit ramp time; `V = n̄(0) C / τ²` for any `τ`.
pub fn cost_geometry(omega_i: f64, omega_f: f64) -> Result<f64> {
    let unit = FrequencyProtocol::new(omega_i, omega_f, 1.0)?;
    Ok(sta_cost(&unit, 1.0)?.v)
}
