//! Mean-photon-number evolution under a single bath, plus thermal-state
//! bookkeeping. Time is the dimensionless collision clock.

use serde::{Deserialize, Serialize};

use crate::bath::AtomBath;
use crate::error::{OttoError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonState {
    pub nbar: f64,
    pub t: f64,
}

impl PhotonState {
    /// Advances the state by `dt` under `bath`.
    pub fn evolve(self, dt: f64, bath: &AtomBath) -> Self {
        Self {
            nbar: nbar_evolve(self.nbar, dt, bath),
            t: self.t + dt,
        }
    }
}

/// `dn̄/dt = E(n̄ + 1) - G n̄`.
#[inline]
pub fn nbar_rate(nbar: f64, bath: &AtomBath) -> f64 {
    bath.e * (nbar + 1.0) - bath.g * nbar
}

/// Closed-form solution `(n̄₀ - E/Δ) e^{-Δt} + E/Δ`.
#[inline]
pub fn nbar_evolve(n0: f64, t: f64, bath: &AtomBath) -> f64 {
    let target = bath.nbar_ss();
    (n0 - target) * (-bath.delta() * t).exp() + target
}

/// Inverse temperature `ln((n̄+1)/n̄) / ω` of a thermal state.
pub fn temperature_from_nbar(nbar: f64, omega: f64) -> Result<f64> {
    if !(nbar > 0.0) {
        return Err(OttoError::Domain(format!(
            "inverse temperature undefined for nbar = {nbar}"
        )));
    }
    Ok((1.0 / nbar).ln_1p() / omega)
}

/// Entropy `(n̄+1)ln(n̄+1) - n̄ ln n̄` of a thermal state; zero at the vacuum.
pub fn entropy(nbar: f64) -> f64 {
    if nbar <= 0.0 {
        return 0.0;
    }
    nbar.ln_1p() + nbar * (1.0 / nbar).ln_1p()
}

/// Stationary photon-number distribution `(1 - E/G)(E/G)^n`.
pub fn thermal_population(n: u32, bath: &AtomBath) -> f64 {
    let ratio = bath.e / bath.g;
    (1.0 - ratio) * ratio.powi(n as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn bath(e: f64, g: f64) -> AtomBath {
        AtomBath::new(e, g, 2, "").unwrap()
    }

    #[test]
    fn rate_examples() {
        let b = bath(0.2, 0.4);
        assert!(nbar_rate(b.nbar_ss(), &b).abs() < 1e-15);
        assert_relative_eq!(nbar_rate(0.0, &b), 0.2);
        assert_relative_eq!(nbar_rate(3.0, &b), -0.4, epsilon = 1e-15);
    }

    #[test]
    fn evolve_limits() {
        let b = bath(0.2, 0.4);
        assert_eq!(nbar_evolve(3.7, 0.0, &b), 3.7);
        assert_relative_eq!(nbar_evolve(3.7, 1e4, &b), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn evolve_matches_rk4_oracle() {
        let b = bath(0.2, 0.4);
        let sol = ode::integrate(|_, n| nbar_rate(n, &b), 0.0, 0.0, 5.0, 16, 1e-10).unwrap();
        assert!((nbar_evolve(0.0, 5.0, &b) - sol.value).abs() < 1e-8);
    }

    #[test]
    fn temperature_examples() {
        assert_relative_eq!(temperature_from_nbar(1.0, LN_2).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(temperature_from_nbar(2.0, 1.0).unwrap(), 1.5f64.ln(), max_relative = 1e-15);
        assert!(temperature_from_nbar(0.0, 1.0).is_err());
        let b = bath(0.13, 0.37);
        let beta = temperature_from_nbar(b.nbar_ss(), 0.8).unwrap();
        assert_relative_eq!(beta, crate::bath::effective_beta(&b, 0.8), max_relative = 1e-12);
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(0.0), 0.0);
        assert_relative_eq!(entropy(1.0), 2.0 * LN_2, max_relative = 1e-15);
        // dS/dn̄ = ln((n̄+1)/n̄) at n̄ = 2 by central difference.
        let h = 1e-5;
        let fd = (entropy(2.0 + h) - entropy(2.0 - h)) / (2.0 * h);
        assert_relative_eq!(fd, 1.5f64.ln(), max_relative = 1e-8);
    }

    #[test]
    fn populations_are_geometric() {
        let b = bath(0.2, 0.4);
        assert_relative_eq!(thermal_population(0, &b), 0.5);
        let b = bath(0.27, 0.3);
        let (mut sum, mut mean) = (0.0, 0.0);
        for n in 0..=400 {
            let p = thermal_population(n, &b);
            sum += p;
            mean += n as f64 * p;
        }
        assert!((sum - 1.0).abs() < 1e-12);
        assert_relative_eq!(mean, b.nbar_ss(), max_relative = 1e-7);
    }

    proptest! {
        #[test]
        fn semigroup(n0 in 0.0f64..10.0, e in 0.0f64..0.3, d in 0.01f64..0.35, t1 in 0.0f64..20.0, t2 in 0.0f64..20.0) {
            let b = bath(e, e + d);
            let two = nbar_evolve(nbar_evolve(n0, t1, &b), t2, &b);
            let one = nbar_evolve(n0, t1 + t2, &b);
            prop_assert!((two - one).abs() <= 1e-12 * one.abs().max(1.0));
        }

        #[test]
        fn contraction(n0 in 0.0f64..10.0, e in 0.0f64..0.3, d in 0.01f64..0.35) {
            let b = bath(e, e + d);
            let target = b.nbar_ss();
            prop_assume!((n0 - target).abs() > 1e-3);
            for k in 0..=3 {
                let t = 10f64.powi(k - 1) / d;
                let gap = (nbar_evolve(n0, t, &b) - target).abs();
                let expected = (n0 - target).abs() * (-d * t).exp();
                prop_assert!((gap - expected).abs() <= 1e-12 * (n0.abs() + target) );
            }
        }

        #[test]
        fn closed_form_matches_ode(n0 in 0.0f64..5.0, e in 0.0f64..0.3, d in 0.01f64..0.35, t in 0.0f64..30.0) {
            let b = bath(e, e + d);
            let sol = ode::integrate(|_, n| nbar_rate(n, &b), n0, 0.0, t, 16, 1e-10).unwrap();
            prop_assert!((nbar_evolve(n0, t, &b) - sol.value).abs() < 1e-8);
        }

        #[test]
        fn temperature_decreasing(n in 0.01f64..50.0, k in 1.0001f64..3.0) {
            prop_assert!(temperature_from_nbar(n * k, 1.0).unwrap() < temperature_from_nbar(n, 1.0).unwrap());
        }
    }
}
