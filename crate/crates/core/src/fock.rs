//! Brute-force reference for the photon-number dynamics.
//!
//! Propagates the oscillator's photon-number distribution in a truncated
//! Fock space, either under the Lindblad generator
//! `E D[a†] + G D[a]` or by composing discrete second-order collisions.
//! Both dissipators keep number-diagonal states diagonal, so only the
//! populations are stored. Probability flowing past `n_cut` is lost and
//! reported as leakage.

use crate::bath::AtomBath;
use crate::error::{OttoError, Result};

/// Default bound on the probability lost through the truncation.
pub const DEFAULT_LEAKAGE_BOUND: f64 = 1e-9;

const NEGATIVITY_FLOOR: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    populations: Vec<f64>,
}

impl FockDensity {
    pub fn from_populations(populations: Vec<f64>) -> Result<Self> {
        if populations.is_empty() {
            return Err(OttoError::InvalidInput("empty population vector".into()));
        }
        if let Some((index, &value)) = populations.iter().enumerate().find(|(_, p)| !(**p >= 0.0)) {
            return Err(OttoError::Negativity { index, value });
        }
        let trace: f64 = populations.iter().sum();
        if trace > 1.0 + 1e-12 {
            return Err(OttoError::InvalidInput(format!("trace {trace} exceeds 1")));
        }
        Ok(Self { populations })
    }

    pub fn vacuum(n_cut: usize) -> Self {
        let mut populations = vec![0.0; n_cut + 1];
        populations[0] = 1.0;
        Self { populations }
    }

    /// Thermal (geometric) state with mean `nbar`, truncated at `n_cut`.
    pub fn thermal(nbar: f64, n_cut: usize) -> Self {
        let ratio = nbar / (nbar + 1.0);
        let mut p = 1.0 - ratio;
        let populations = (0..=n_cut)
            .map(|_| {
                let here = p;
                p *= ratio;
                here
            })
            .collect();
        Self { populations }
    }

    /// Stationary state of `bath`, truncated at `n_cut`.
    pub fn stationary(bath: &AtomBath, n_cut: usize) -> Self {
        Self::thermal(bath.nbar_ss(), n_cut)
    }

    pub fn n_cut(&self) -> usize {
        self.populations.len() - 1
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn trace(&self) -> f64 {
        self.populations.iter().sum()
    }

    pub fn leakage(&self) -> f64 {
        1.0 - self.trace()
    }

    pub fn mean(&self) -> f64 {
        self.populations
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum()
    }

    pub fn total_variation(&self, other: &FockDensity) -> f64 {
        let n = self.populations.len().max(other.populations.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        0.5 * (0..n)
            .map(|i| (get(&self.populations, i) - get(&other.populations, i)).abs())
            .sum::<f64>()
    }
}

/// Writes `dp/dt` for the diagonal of `E D[a†] + G D[a]` into `out`.
fn generator(p: &[f64], e: f64, g: f64, out: &mut [f64]) {
    let last = p.len() - 1;
    for n in 0..=last {
        let nf = n as f64;
        let from_below = if n > 0 { nf * p[n - 1] } else { 0.0 };
        let from_above = if n < last { (nf + 1.0) * p[n + 1] } else { 0.0 };
        out[n] = e * (from_below - (nf + 1.0) * p[n]) + g * (from_above - nf * p[n]);
    }
}

/// Smallest cutoff whose stationary tail beyond it is below 1e-12 for every
/// bath given, with 20% headroom.
pub fn default_cutoff(baths: &[&AtomBath]) -> usize {
    let ratio = baths
        .iter()
        .map(|b| b.e / b.g)
        .fold(0.0f64, f64::max);
    if ratio <= 0.0 {
        return 8;
    }
    // tail mass beyond N is ratio^(N+1)
    let n = ((1e-12f64).ln() / ratio.ln()).ceil() as usize;
    (n as f64 * 1.2).ceil() as usize
}

/// Fixed RK4 step `0.01 / ((E+G) N_cut)`.
pub fn default_dt(bath: &AtomBath, n_cut: usize) -> f64 {
    0.01 / ((bath.e + bath.g) * n_cut.max(1) as f64)
}

/// Fixed-step RK4 propagation of the truncated Lindblad equation.
#[derive(Debug, Clone)]
pub struct LindbladPropagator {
    e: f64,
    g: f64,
    dt: f64,
    leakage_bound: f64,
    k: [Vec<f64>; 4],
    scratch: Vec<f64>,
}

impl LindbladPropagator {
    pub fn new(bath: &AtomBath, n_cut: usize, dt: f64) -> Result<Self> {
        if !(dt > 0.0) || dt * (bath.e + bath.g) * n_cut as f64 >= 0.5 {
            return Err(OttoError::InvalidInput(format!(
                "step dt = {dt} outside the stable range for N_cut = {n_cut}"
            )));
        }
        let len = n_cut + 1;
        Ok(Self {
            e: bath.e,
            g: bath.g,
            dt,
            leakage_bound: DEFAULT_LEAKAGE_BOUND,
            k: std::array::from_fn(|_| vec![0.0; len]),
            scratch: vec![0.0; len],
        })
    }

    pub fn with_leakage_bound(mut self, bound: f64) -> Self {
        self.leakage_bound = bound;
        self
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn rk4(&mut self, p: &mut [f64], h: f64) {
        let (e, g) = (self.e, self.g);
        let [k1, k2, k3, k4] = &mut self.k;
        let s = &mut self.scratch;
        generator(p, e, g, k1);
        for i in 0..p.len() {
            s[i] = p[i] + 0.5 * h * k1[i];
        }
        generator(s, e, g, k2);
        for i in 0..p.len() {
            s[i] = p[i] + 0.5 * h * k2[i];
        }
        generator(s, e, g, k3);
        for i in 0..p.len() {
            s[i] = p[i] + h * k3[i];
        }
        generator(s, e, g, k4);
        for i in 0..p.len() {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    fn check(&self, rho: &FockDensity) -> Result<()> {
        let leakage = rho.leakage();
        if leakage > self.leakage_bound {
            return Err(OttoError::Truncation {
                leakage,
                bound: self.leakage_bound,
            });
        }
        Ok(())
    }

    /// One step of length `dt`.
    pub fn step(&mut self, rho: &mut FockDensity) -> Result<()> {
        self.check_len(rho)?;
        let h = self.dt;
        self.rk4(&mut rho.populations, h);
        self.check(rho)
    }

    fn check_len(&self, rho: &FockDensity) -> Result<()> {
        if rho.populations.len() != self.scratch.len() {
            return Err(OttoError::InvalidInput(format!(
                "state has cutoff {}, propagator expects {}",
                rho.n_cut(),
                self.scratch.len() - 1
            )));
        }
        Ok(())
    }

    /// Propagates for total time `t`; the final step is shortened to land on `t`.
    pub fn propagate(&mut self, rho: &mut FockDensity, t: f64) -> Result<()> {
        self.check_len(rho)?;
        let full = (t / self.dt).floor() as usize;
        for _ in 0..full {
            let h = self.dt;
            self.rk4(&mut rho.populations, h);
        }
        let rest = t - full as f64 * self.dt;
        if rest > 0.0 {
            self.rk4(&mut rho.populations, rest);
        }
        self.check(rho)
    }

    /// Propagates to each time in `times` (non-decreasing) and records the mean.
    pub fn mean_trajectory(&mut self, mut rho: FockDensity, times: &[f64]) -> Result<Vec<f64>> {
        let mut now = 0.0;
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            if t < now {
                return Err(OttoError::InvalidInput("sample times must be non-decreasing".into()));
            }
            self.propagate(&mut rho, t - now)?;
            now = t;
            out.push(rho.mean());
        }
        Ok(out)
    }
}

/// Single Lindblad step of length `dt` with the default leakage bound.
pub fn lindblad_step(rho: &FockDensity, dt: f64, bath: &AtomBath) -> Result<FockDensity> {
    let mut prop = LindbladPropagator::new(bath, rho.n_cut(), dt)?;
    let mut next = rho.clone();
    prop.step(&mut next)?;
    Ok(next)
}

/// Propagates `rho` for time `t` using [`default_dt`].
pub fn lindblad_propagate(rho: &FockDensity, t: f64, bath: &AtomBath) -> Result<FockDensity> {
    let mut prop = LindbladPropagator::new(bath, rho.n_cut(), default_dt(bath, rho.n_cut()))?;
    let mut next = rho.clone();
    prop.propagate(&mut next, t)?;
    Ok(next)
}

/// One weak atom collision, expanded to second order in `λτ`.
#[derive(Debug, Clone)]
pub struct CollisionParams {
    pub lambda_tau: f64,
    pub bath: AtomBath,
}

/// `ρ → ρ + (λτ)² (E D[a†] + G D[a]) ρ` on the number-basis diagonal.
pub fn collision_map(rho: &FockDensity, params: &CollisionParams) -> Result<FockDensity> {
    let strength = params.lambda_tau * params.lambda_tau;
    let p = &rho.populations;
    let mut d = vec![0.0; p.len()];
    generator(p, params.bath.e, params.bath.g, &mut d);
    let populations: Vec<f64> = p.iter().zip(&d).map(|(p, d)| p + strength * d).collect();
    if let Some((index, &value)) = populations
        .iter()
        .enumerate()
        .find(|(_, v)| **v < NEGATIVITY_FLOOR)
    {
        return Err(OttoError::Negativity { index, value });
    }
    Ok(FockDensity { populations })
}

/// Applies `count` collisions whose strengths sum to `total_time`.
pub fn compose_collisions(rho: &FockDensity, bath: &AtomBath, total_time: f64, count: usize) -> Result<FockDensity> {
    let params = CollisionParams {
        lambda_tau: (total_time / count as f64).sqrt(),
        bath: bath.clone(),
    };
    let mut state = rho.clone();
    for _ in 0..count {
        state = collision_map(&state, &params)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::nbar_evolve;

    fn bath(e: f64, g: f64) -> AtomBath {
        AtomBath::new(e, g, 2, "").unwrap()
    }

    #[test]
    fn geometric_state_is_stationary() {
        let b = bath(0.2, 0.4);
        let n_cut = default_cutoff(&[&b]);
        let rho = FockDensity::stationary(&b, n_cut);
        let after = lindblad_propagate(&rho, 1.0, &b).unwrap();
        assert!(rho.total_variation(&after) < 1e-8);
        let hit = collision_map(&rho, &CollisionParams { lambda_tau: 0.05, bath: b.clone() }).unwrap();
        assert!(rho.total_variation(&hit) < 1e-8 * 0.05 * 0.05);
    }

    #[test]
    fn vacuum_stays_without_excitation() {
        let b = bath(0.0, 0.4);
        let rho = FockDensity::vacuum(20);
        let after = lindblad_propagate(&rho, 5.0, &b).unwrap();
        assert_eq!(after.populations()[0], 1.0);
        assert_eq!(after.mean(), 0.0);
    }

    #[test]
    fn mean_follows_closed_form() {
        let b = bath(0.2, 0.4);
        let rho = FockDensity::thermal(0.3, 60);
        let mut prop = LindbladPropagator::new(&b, 60, default_dt(&b, 60)).unwrap();
        let times: Vec<f64> = (0..=10).map(|k| k as f64).collect();
        let means = prop.mean_trajectory(rho, &times).unwrap();
        for (t, m) in times.iter().zip(means) {
            assert!((m - nbar_evolve(0.3, *t, &b)).abs() < 1e-9, "t = {t}");
        }
    }

    #[test]
    fn trace_conserved_per_step() {
        let b = bath(0.2, 0.4);
        let mut rho = FockDensity::thermal(1.0, 80);
        let mut prop = LindbladPropagator::new(&b, 80, 0.01).unwrap();
        for _ in 0..100 {
            let before = rho.trace();
            prop.step(&mut rho).unwrap();
            assert!((rho.trace() - before).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_is_reported() {
        let b = bath(0.3, 0.35);
        let rho = FockDensity::thermal(2.0, 10);
        let err = lindblad_propagate(&rho, 1.0, &b).unwrap_err();
        assert!(matches!(err, OttoError::Truncation { .. }));
    }

    #[test]
    fn unstable_step_rejected() {
        let b = bath(0.2, 0.4);
        assert!(LindbladPropagator::new(&b, 100, 0.01).is_err());
    }

    #[test]
    fn zero_strength_collision_is_identity() {
        let b = bath(0.2, 0.4);
        let rho = FockDensity::thermal(0.7, 30);
        let out = collision_map(&rho, &CollisionParams { lambda_tau: 0.0, bath: b }).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn single_collision_moves_mean_by_rate() {
        let b = bath(0.2, 0.4);
        let rho = FockDensity::thermal(0.7, 60);
        let lt: f64 = 0.03;
        let out = collision_map(&rho, &CollisionParams { lambda_tau: lt, bath: b.clone() }).unwrap();
        let expected = lt * lt * crate::dynamics::nbar_rate(rho.mean(), &b);
        assert!((out.mean() - rho.mean() - expected).abs() < lt.powi(4));
    }

    #[test]
    fn strong_collision_goes_negative() {
        let b = bath(0.2, 0.4);
        let rho = FockDensity::thermal(3.0, 60);
        let err = collision_map(&rho, &CollisionParams { lambda_tau: 1.5, bath: b }).unwrap_err();
        assert!(matches!(err, OttoError::Negativity { .. }));
    }

    #[test]
    fn cutoff_tail_bound() {
        let b = bath(0.25, 0.375);
        let n = default_cutoff(&[&b]);
        let r = b.e / b.g;
        assert!(r.powi((n as f64 / 1.2) as i32) < 1.1e-12);
    }

    #[test]
    fn rejects_negative_populations() {
        assert!(FockDensity::from_populations(vec![0.5, -0.1]).is_err());
        assert!(FockDensity::from_populations(vec![0.5, 0.5]).is_ok());
    }
}
