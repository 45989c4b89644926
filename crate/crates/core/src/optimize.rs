//! Max-power search over cycle time, stroke fractions and bath coherence.
//!
//! The inner search maximizes `P(t_cycle)` at fixed `(p, q, r)`: a
//! log-spaced scan brackets the peak and a golden-section search refines it
//! in `ln t_cycle`. The outer search maximizes the resulting peak power over
//! `(p, q, r)` by cyclic coordinate ascent, one grid-plus-golden line search
//! per coordinate.

use serde::{Deserialize, Serialize};

use crate::bath::{make_pair_pi, AtomBath, BathPair};
use crate::cycle::{run_cycle_with, CostGeometry, CycleReport, HeatKernel, OttoConfig, StrokeSchedule};
use crate::error::{OttoError, Result};

/// `(√5 - 1)/2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Relative offset of the certificate points around an optimum.
pub const CERTIFICATE_OFFSET: f64 = 1e-3;

/// Maximizes a unimodal `f` on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn golden_section_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Power of an engine with fixed baths and frequencies as a function of the
/// schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerModel {
    pub hot: AtomBath,
    pub cold: AtomBath,
    pub omega_h: f64,
    pub omega_c: f64,
    pub kappa: f64,
    pub geometry: CostGeometry,
}

impl PowerModel {
    pub fn new(hot: AtomBath, cold: AtomBath, omega_h: f64, omega_c: f64, kappa: f64) -> Result<Self> {
        let geometry = CostGeometry::new(omega_h, omega_c)?;
        let model = Self {
            hot,
            cold,
            omega_h,
            omega_c,
            kappa,
            geometry,
        };
        model.config(1.0, 0.5, 0.5, 0.5)?;
        Ok(model)
    }

    pub fn from_pair(pair: &BathPair, omega_h: f64, omega_c: f64, kappa: f64) -> Result<Self> {
        Self::new(pair.hot.clone(), pair.cold.clone(), omega_h, omega_c, kappa)
    }

    pub fn from_config(cfg: &OttoConfig) -> Result<Self> {
        Self::new(cfg.hot.clone(), cfg.cold.clone(), cfg.omega_h, cfg.omega_c, cfg.kappa)
    }

    pub fn config(&self, t_cycle: f64, p: f64, q: f64, r: f64) -> Result<OttoConfig> {
        OttoConfig::new(
            self.hot.clone(),
            self.cold.clone(),
            self.omega_h,
            self.omega_c,
            StrokeSchedule::from_fractions(t_cycle, p, q, r)?,
            self.kappa,
        )
    }

    pub fn report(&self, t_cycle: f64, p: f64, q: f64, r: f64) -> Result<CycleReport> {
        Ok(run_cycle_with(&self.config(t_cycle, p, q, r)?, &self.geometry))
    }

    /// Net power without validation; fractions must lie in `(0, 1)`.
    pub fn power(&self, t_cycle: f64, p: f64, q: f64, r: f64) -> f64 {
        let t_q = p * t_cycle;
        let t_w = (1.0 - p) * t_cycle;
        let k = HeatKernel::new(&self.hot, &self.cold, q * t_q, (1.0 - q) * t_q);
        let tau_e = r * t_w / self.kappa;
        let tau_c = (1.0 - r) * t_w / self.kappa;
        let n_c = k.nbar_sc();
        let n_h = k.nbar_h();
        let work = (self.omega_h - self.omega_c) * k.delta_nbar();
        let cost = n_h * self.geometry.c_e / (tau_e * tau_e) + n_c * self.geometry.c_c / (tau_c * tau_c);
        (work - cost) / t_cycle
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcycleSearch {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    /// Relative tolerance on the located `t_cycle`.
    pub rel_tol: f64,
}

impl Default for TcycleSearch {
    fn default() -> Self {
        Self {
            lo: 1e-2,
            hi: 1e3,
            points: 200,
            rel_tol: 1e-6,
        }
    }
}

impl TcycleSearch {
    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.points)
    }
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// Powers at `t(1 - ε)` and `t(1 + ε)` around an optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub t_minus: f64,
    pub power_minus: f64,
    pub t_plus: f64,
    pub power_plus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub t_cycle: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub power: f64,
    pub certificate: Certificate,
}

impl Optimum {
    pub fn dominates_neighbors(&self) -> bool {
        self.power >= self.certificate.power_minus && self.power >= self.certificate.power_plus
    }
}

/// Best `(t_cycle, P)` at fixed fractions, profitable or not.
pub fn peak_power(model: &PowerModel, p: f64, q: f64, r: f64, search: &TcycleSearch) -> Optimum {
    let grid = search.grid();
    let values: Vec<f64> = grid.iter().map(|&t| model.power(t, p, q, r)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(grid.len() - 1)];
    let (mut t, mut power) = (grid[best], values[best]);
    if hi > lo {
        let (ln_t, v) = golden_section_max(|x| model.power(x.exp(), p, q, r), lo.ln(), hi.ln(), search.rel_tol);
        if v > power {
            t = ln_t.exp();
            power = v;
        }
    }
    let t_minus = t * (1.0 - CERTIFICATE_OFFSET);
    let t_plus = t * (1.0 + CERTIFICATE_OFFSET);
    Optimum {
        t_cycle: t,
        p,
        q,
        r,
        power,
        certificate: Certificate {
            t_minus,
            power_minus: model.power(t_minus, p, q, r),
            t_plus,
            power_plus: model.power(t_plus, p, q, r),
        },
    }
}

/// Peak power over `t_cycle`; fails when no scanned cycle is profitable.
pub fn max_power_tcycle(model: &PowerModel, p: f64, q: f64, r: f64, search: &TcycleSearch) -> Result<Optimum> {
    model.config(1.0, p, q, r)?;
    let opt = peak_power(model, p, q, r, search);
    if !(opt.power > 0.0) {
        return Err(OttoError::NoProfitableCycle {
            best_power: opt.power,
            t_cycle: opt.t_cycle,
        });
    }
    Ok(opt)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AscentOptions {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
    /// Stop once a round improves the objective by less than this fraction.
    pub rel_tol: f64,
    pub max_rounds: usize,
    /// Bracket width at which each line search's golden refinement stops.
    pub line_tol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            lo: 0.02,
            hi: 0.98,
            step: 0.02,
            rel_tol: 1e-8,
            max_rounds: 20,
            line_tol: 1e-7,
        }
    }
}

impl AscentOptions {
    pub fn grid(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

/// Objective along one coordinate with the others held fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSection {
    pub axis: usize,
    pub fixed: [f64; 3],
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AscentResult {
    pub x: [f64; 3],
    pub value: f64,
    pub rounds: usize,
    pub converged: bool,
    /// The three line scans of the first round.
    pub cross_sections: Vec<CrossSection>,
}

/// Cyclic coordinate ascent of `f` over the box `[lo, hi]³`.
pub fn coordinate_ascent<F: Fn([f64; 3]) -> f64>(f: F, start: [f64; 3], opts: &AscentOptions) -> AscentResult {
    let grid = opts.grid();
    let mut x = start;
    let mut value = f(x);
    let mut cross_sections = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    while rounds < opts.max_rounds {
        rounds += 1;
        let before = value;
        for axis in 0..3 {
            let at = |v: f64| {
                let mut y = x;
                y[axis] = v;
                y
            };
            let scan: Vec<(f64, f64)> = grid.iter().map(|&g| (g, f(at(g)))).collect();
            let mut best = 0;
            for (i, s) in scan.iter().enumerate() {
                if s.1 > scan[best].1 {
                    best = i;
                }
            }
            let (mut cand, mut cand_value) = scan[best];
            let lo = scan[best.saturating_sub(1)].0;
            let hi = scan[(best + 1).min(scan.len() - 1)].0;
            let (g, gv) = golden_section_max(|v| f(at(v)), lo, hi, opts.line_tol);
            if gv > cand_value {
                cand = g;
                cand_value = gv;
            }
            if rounds == 1 {
                cross_sections.push(CrossSection {
                    axis,
                    fixed: x,
                    points: scan,
                });
            }
            if cand_value > value {
                x[axis] = cand;
                value = cand_value;
            }
        }
        if value - before <= opts.rel_tol * before.abs() {
            converged = true;
            break;
        }
    }
    AscentResult {
        x,
        value,
        rounds,
        converged,
        cross_sections,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PqrOptimum {
    pub optimum: Optimum,
    pub rounds: usize,
    pub converged: bool,
    pub cross_sections: Vec<CrossSection>,
}

/// `max_{p,q,r} max_{t_cycle} P(t_cycle, p, q, r)` by coordinate ascent from `start`.
pub fn max_power_pqr(model: &PowerModel, start: [f64; 3], search: &TcycleSearch, opts: &AscentOptions) -> Result<PqrOptimum> {
    let ascent = coordinate_ascent(|[p, q, r]| peak_power(model, p, q, r, search).power, start, opts);
    let [p, q, r] = ascent.x;
    let optimum = max_power_tcycle(model, p, q, r, search)?;
    Ok(PqrOptimum {
        optimum,
        rounds: ascent.rounds,
        converged: ascent.converged,
        cross_sections: ascent.cross_sections,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiPoint {
    pub pi: f64,
    pub delta_h: f64,
    pub delta_c: f64,
    /// Work per cycle at the reference cycle time.
    pub work: f64,
    pub peak_power: f64,
    pub t_peak: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiSweep {
    pub points: Vec<PiPoint>,
    pub argmax_work: f64,
    pub argmax_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PiSweepSpec {
    pub omega_h: f64,
    pub omega_c: f64,
    pub kappa: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub t_reference: f64,
}

/// Work and peak power along the π family built from the incoherent `base`.
pub fn pi_sweep(base: &BathPair, pis: &[f64], spec: &PiSweepSpec, search: &TcycleSearch) -> Result<PiSweep> {
    let mut points = Vec::with_capacity(pis.len());
    for &pi in pis {
        let pair = make_pair_pi(pi, base)?;
        let model = PowerModel::from_pair(&pair, spec.omega_h, spec.omega_c, spec.kappa)?;
        let report = model.report(spec.t_reference, spec.p, spec.q, spec.r)?;
        let peak = peak_power(&model, spec.p, spec.q, spec.r, search);
        points.push(PiPoint {
            pi,
            delta_h: pair.hot.delta(),
            delta_c: pair.cold.delta(),
            work: report.work,
            peak_power: peak.power,
            t_peak: peak.t_cycle,
        });
    }
    let argmax = |key: fn(&PiPoint) -> f64| {
        points
            .iter()
            .fold(None::<&PiPoint>, |best, p| match best {
                Some(b) if key(b) >= key(p) => Some(b),
                _ => Some(p),
            })
            .map_or(f64::NAN, |p| p.pi)
    };
    Ok(PiSweep {
        argmax_work: argmax(|p| p.work),
        argmax_power: argmax(|p| p.peak_power),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{make_pair_from_nbar, PairKind};
    use approx::assert_relative_eq;

    fn model(kind: PairKind) -> PowerModel {
        let pair = make_pair_from_nbar(kind, 2.0, 0.55, 1.0, 2).unwrap();
        PowerModel::from_pair(&pair, 1.0, 0.5, 1.0).unwrap()
    }

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, v) = golden_section_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 4.0, 1e-10);
        // Position is resolvable only to about sqrt(machine epsilon).
        assert!((x - 0.3).abs() < 1e-7);
        assert_relative_eq!(v, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn fast_power_matches_report() {
        let m = model(PairKind::CoherentCold);
        let r = m.report(7.3, 0.6, 0.7, 0.55).unwrap();
        assert_relative_eq!(m.power(7.3, 0.6, 0.7, 0.55), r.power, max_relative = 1e-13);
    }

    #[test]
    fn ascent_grid_stays_inside_the_box() {
        for step in [0.02, 0.1, 0.3, 0.07] {
            let g = AscentOptions { step, ..Default::default() }.grid();
            assert_eq!(g[0], 0.02);
            assert!(g.iter().all(|v| *v <= 0.98 + 1e-12), "step {step}");
        }
        assert_eq!(AscentOptions::default().grid().len(), 49);
    }

    #[test]
    fn grid_endpoints() {
        let g = TcycleSearch::default().grid();
        assert_eq!(g.len(), 200);
        assert_eq!((g[0], g[199]), (1e-2, 1e3));
        let a = AscentOptions::default().grid();
        assert_eq!(a.len(), 49);
        assert!(a.iter().any(|x| (x - 0.5).abs() < 1e-15));
    }

    #[test]
    fn tcycle_optimum_is_certified() {
        let m = model(PairKind::Incoherent);
        let opt = max_power_tcycle(&m, 0.5, 0.5, 0.5, &TcycleSearch::default()).unwrap();
        assert!(opt.dominates_neighbors());
        assert!(opt.t_cycle > 1e-2 && opt.t_cycle < 1e3);
    }

    #[test]
    fn no_profit_without_temperature_gap() {
        let hot = AtomBath::new(0.2, 0.4, 2, "").unwrap();
        let cold = AtomBath::new(0.1, 0.2, 2, "").unwrap();
        let m = PowerModel::new(hot, cold, 1.0, 0.5, 1.0).unwrap();
        let err = max_power_tcycle(&m, 0.5, 0.5, 0.5, &TcycleSearch::default()).unwrap_err();
        assert!(matches!(err, OttoError::NoProfitableCycle { .. }));
    }

    #[test]
    fn symmetric_objective_stays_centered() {
        let f = |x: [f64; 3]| -x.iter().map(|v| (v - 0.5).powi(2) * (1.0 + (v - 0.5).powi(2))).sum::<f64>();
        let res = coordinate_ascent(f, [0.5; 3], &AscentOptions::default());
        assert_eq!(res.x, [0.5; 3]);
        assert!(res.converged && res.rounds == 1);
    }

    #[test]
    fn ascent_on_separable_objective() {
        let f = |x: [f64; 3]| -((x[0] - 0.31).powi(2) + 2.0 * (x[1] - 0.77).powi(2) + (x[2] - 0.6).powi(2));
        let res = coordinate_ascent(f, [0.5; 3], &AscentOptions::default());
        for (got, want) in res.x.iter().zip([0.31, 0.77, 0.6]) {
            assert!((got - want).abs() < 1e-6);
        }
        assert_eq!(res.cross_sections.len(), 3);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let m = model(PairKind::CoherentCold);
        let search = TcycleSearch {
            points: 60,
            ..TcycleSearch::default()
        };
        let opts = AscentOptions {
            max_rounds: 3,
            ..AscentOptions::default()
        };
        let a = max_power_pqr(&m, [0.5; 3], &search, &opts).unwrap();
        let b = max_power_pqr(&m, [0.5; 3], &search, &opts).unwrap();
        assert_eq!(a, b);
        let base = max_power_tcycle(&m, 0.5, 0.5, 0.5, &search).unwrap();
        assert!(a.optimum.power >= base.power);
    }

    #[test]
    fn pi_sweep_prefers_full_coherence_for_work() {
        let base = make_pair_from_nbar(PairKind::Incoherent, 2.0, 0.55, 1.0, 2).unwrap();
        let spec = PiSweepSpec {
            omega_h: 1.0,
            omega_c: 0.5,
            kappa: 1.0,
            p: 0.5,
            q: 0.5,
            r: 0.5,
            t_reference: 8.0,
        };
        let pis: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let sweep = pi_sweep(&base, &pis, &spec, &TcycleSearch::default()).unwrap();
        assert_eq!(sweep.argmax_work, 1.0);
        for w in sweep.points.windows(2) {
            assert!(w[1].work > w[0].work);
        }
    }
}
