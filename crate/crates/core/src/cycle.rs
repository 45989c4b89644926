//! Steady-cycle accounting for the Otto engine.
//!
//! A cycle runs hot stroke → expansion → cold stroke → compression. The
//! photon number relaxes exponentially during heat strokes and is frozen
//! during the STA work strokes, so the whole cycle reduces to the two-stroke
//! map `n ↦ cold(hot(n))`. All steady-cycle quantities use its closed-form
//! fixed point, written with `expm1` so that neither long nor short strokes
//! overflow or cancel.

use serde::{Deserialize, Serialize};

use crate::bath::AtomBath;
use crate::dynamics::nbar_evolve;
use crate::error::{OttoError, Result};
use crate::sta::{cost_geometry, sta_cost, FrequencyProtocol};

/// Below this total relaxation exponent the weights use a series expansion.
pub const SERIES_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrokeSchedule {
    pub t_h: f64,
    pub t_c: f64,
    pub t_we: f64,
    pub t_wc: f64,
}

impl StrokeSchedule {
    pub fn new(t_h: f64, t_c: f64, t_we: f64, t_wc: f64) -> Result<Self> {
        for (name, v) in [("t_h", t_h), ("t_c", t_c), ("t_We", t_we), ("t_Wc", t_wc)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(OttoError::InvalidInput(format!("{name} = {v} must be positive")));
            }
        }
        Ok(Self { t_h, t_c, t_we, t_wc })
    }

    /// `t_Q = p t`, `t_W = (1-p) t`, then `q` splits `t_Q` hot/cold and `r`
    /// splits `t_W` expansion/compression.
    pub fn from_fractions(t_cycle: f64, p: f64, q: f64, r: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q), ("r", r)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(OttoError::InvalidInput(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        if !(t_cycle > 0.0 && t_cycle.is_finite()) {
            return Err(OttoError::InvalidInput(format!("t_cycle = {t_cycle} must be positive")));
        }
        let t_q = p * t_cycle;
        let t_w = (1.0 - p) * t_cycle;
        Self::new(q * t_q, (1.0 - q) * t_q, r * t_w, (1.0 - r) * t_w)
    }

    pub fn quarters(t_cycle: f64) -> Result<Self> {
        Self::from_fractions(t_cycle, 0.5, 0.5, 0.5)
    }

    pub fn t_cycle(&self) -> f64 {
        self.t_h + self.t_c + self.t_we + self.t_wc
    }
}

/// Relaxation data of the two heat strokes: targets `a = E/Δ`, rates `Δ` and
/// durations. Unlike [`AtomBath`] it does not require `E + G <= 1`, so it can
/// represent the constrained variations used in derivative checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernel {
    pub target_h: f64,
    pub rate_h: f64,
    pub target_c: f64,
    pub rate_c: f64,
    pub t_h: f64,
    pub t_c: f64,
}

/// Shared exponential pieces of the closed forms.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelParts {
    /// `e^{-x_h}`, `e^{-x_c}`, `e^{-S}`.
    pub eh: f64,
    pub ec: f64,
    pub es: f64,
    /// `m_h/D`, `m_c/D`, `m_h m_c/D` with `m = 1 - e^{-x}`, `D = 1 - e^{-S}`.
    pub mh_d: f64,
    pub mc_d: f64,
    pub mhmc_d: f64,
    pub mh: f64,
    pub mc: f64,
    pub d: f64,
}

/// `(1 - e^{-x})/x` to third order.
#[inline]
fn m_over_x_series(x: f64) -> f64 {
    1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0
}

impl HeatKernel {
    pub fn new(hot: &AtomBath, cold: &AtomBath, t_h: f64, t_c: f64) -> Self {
        Self {
            target_h: hot.nbar_ss(),
            rate_h: hot.delta(),
            target_c: cold.nbar_ss(),
            rate_c: cold.delta(),
            t_h,
            t_c,
        }
    }

    pub fn x_h(&self) -> f64 {
        self.rate_h * self.t_h
    }

    pub fn x_c(&self) -> f64 {
        self.rate_c * self.t_c
    }

    pub(crate) fn parts(&self) -> KernelParts {
        let (xh, xc) = (self.x_h(), self.x_c());
        let s = xh + xc;
        let mh = -(-xh).exp_m1();
        let mc = -(-xc).exp_m1();
        let d = -(-s).exp_m1();
        let (mh_d, mc_d, mhmc_d) = if s < SERIES_THRESHOLD {
            let fs = m_over_x_series(s);
            let fh = m_over_x_series(xh);
            let fc = m_over_x_series(xc);
            (
                xh / s * fh / fs,
                xc / s * fc / fs,
                xh * xc / s * fh * fc / fs,
            )
        } else {
            (mh / d, mc / d, mh * mc / d)
        };
        KernelParts {
            eh: (-xh).exp(),
            ec: (-xc).exp(),
            es: (-s).exp(),
            mh_d,
            mc_d,
            mhmc_d,
            mh,
            mc,
            d,
        }
    }

    /// Start-of-cycle photon number `n̄_sc`.
    pub fn nbar_sc(&self) -> f64 {
        let k = self.parts();
        self.target_h * k.ec * k.mh_d + self.target_c * k.mc_d
    }

    /// Photon number after the hot stroke of the steady cycle.
    pub fn nbar_h(&self) -> f64 {
        let k = self.parts();
        self.target_h * k.mh_d + self.target_c * k.eh * k.mc_d
    }

    /// `n̄_h - n̄_c` in the product form `(a_h - a_c) m_h m_c / D`.
    pub fn delta_nbar(&self) -> f64 {
        (self.target_h - self.target_c) * self.parts().mhmc_d
    }

    /// Photon number after `cycles` full cycles starting from `n0`.
    pub fn after_cycles(&self, n0: f64, cycles: u64) -> f64 {
        let sc = self.nbar_sc();
        (-(cycles as f64) * (self.x_h() + self.x_c())).exp() * (n0 - sc) + sc
    }

    /// One application of the two-stroke map, stroke by stroke.
    pub fn two_stroke(&self, n: f64) -> f64 {
        let hot = (n - self.target_h) * (-self.x_h()).exp() + self.target_h;
        (hot - self.target_c) * (-self.x_c()).exp() + self.target_c
    }
}

/// Cost-geometry factors of the two work strokes: `V = n̄(0) C / τ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostGeometry {
    /// Expansion `ω_h → ω_c`.
    pub c_e: f64,
    /// Compression `ω_c → ω_h`.
    pub c_c: f64,
}

impl CostGeometry {
    pub fn new(omega_h: f64, omega_c: f64) -> Result<Self> {
        Ok(Self {
            c_e: cost_geometry(omega_h, omega_c)?,
            c_c: cost_geometry(omega_c, omega_h)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OttoConfig {
    pub hot: AtomBath,
    pub cold: AtomBath,
    pub omega_h: f64,
    pub omega_c: f64,
    pub schedule: StrokeSchedule,
    /// Work-stroke clock conversion: a work stroke of length `t_W` runs the
    /// ramp for `τ = t_W / κ`.
    pub kappa: f64,
}

impl OttoConfig {
    pub fn new(
        hot: AtomBath,
        cold: AtomBath,
        omega_h: f64,
        omega_c: f64,
        schedule: StrokeSchedule,
        kappa: f64,
    ) -> Result<Self> {
        let cfg = Self {
            hot,
            cold,
            omega_h,
            omega_c,
            schedule,
            kappa,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.hot.validate()?;
        self.cold.validate()?;
        if !(self.omega_h > self.omega_c && self.omega_c > 0.0 && self.omega_h.is_finite()) {
            return Err(OttoError::InvalidInput(format!(
                "need omega_h > omega_c > 0, got {} and {}",
                self.omega_h, self.omega_c
            )));
        }
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(OttoError::InvalidInput(format!("kappa = {} must be positive", self.kappa)));
        }
        let s = self.schedule;
        StrokeSchedule::new(s.t_h, s.t_c, s.t_we, s.t_wc)?;
        Ok(())
    }

    pub fn with_schedule(&self, schedule: StrokeSchedule) -> Self {
        Self {
            schedule,
            ..self.clone()
        }
    }

    pub fn kernel(&self) -> HeatKernel {
        HeatKernel::new(&self.hot, &self.cold, self.schedule.t_h, self.schedule.t_c)
    }

    pub fn t_cycle(&self) -> f64 {
        self.schedule.t_cycle()
    }

    pub fn tau_e(&self) -> f64 {
        self.schedule.t_we / self.kappa
    }

    pub fn tau_c(&self) -> f64 {
        self.schedule.t_wc / self.kappa
    }

    /// Per-photon costs `(I_e, I_c)` of the two work strokes.
    pub fn cost_rates(&self, geometry: &CostGeometry) -> (f64, f64) {
        let (te, tc) = (self.tau_e(), self.tau_c());
        (geometry.c_e / (te * te), geometry.c_c / (tc * tc))
    }
}

pub fn steady_cycle_nbar(cfg: &OttoConfig) -> f64 {
    cfg.kernel().nbar_sc()
}

pub fn nbar_hot(cfg: &OttoConfig) -> f64 {
    cfg.kernel().nbar_h()
}

pub fn delta_nbar(cfg: &OttoConfig) -> f64 {
    cfg.kernel().delta_nbar()
}

pub fn nbar_after_cycles(n0: f64, cycles: u64, cfg: &OttoConfig) -> f64 {
    cfg.kernel().after_cycles(n0, cycles)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleReport {
    pub t_cycle: f64,
    pub nbar_c: f64,
    pub nbar_h: f64,
    pub work: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub v_e: f64,
    pub v_c: f64,
    pub eta: f64,
    pub power: f64,
    /// STA costs exceed the extracted work.
    pub unprofitable: bool,
}

fn assemble(cfg: &OttoConfig, v_e_per_photon: f64, v_c_per_photon: f64) -> CycleReport {
    let k = cfg.kernel();
    let nbar_c = k.nbar_sc();
    let nbar_h = k.nbar_h();
    let dn = k.delta_nbar();
    let q_h = cfg.omega_h * dn;
    let q_c = -cfg.omega_c * dn;
    let work = q_h + q_c;
    let v_e = nbar_h * v_e_per_photon;
    let v_c = nbar_c * v_c_per_photon;
    let net = work - v_e - v_c;
    let t_cycle = cfg.t_cycle();
    CycleReport {
        t_cycle,
        nbar_c,
        nbar_h,
        work,
        q_h,
        q_c,
        v_e,
        v_c,
        eta: if q_h == 0.0 { f64::NAN } else { net / q_h },
        power: net / t_cycle,
        unprofitable: work < v_e + v_c,
    }
}

/// Steady-cycle report with both STA costs integrated directly.
pub fn run_cycle(cfg: &OttoConfig) -> Result<CycleReport> {
    cfg.validate()?;
    let expansion = FrequencyProtocol::new(cfg.omega_h, cfg.omega_c, cfg.tau_e())?;
    let compression = FrequencyProtocol::new(cfg.omega_c, cfg.omega_h, cfg.tau_c())?;
    Ok(assemble(
        cfg,
        sta_cost(&expansion, 1.0)?.v,
        sta_cost(&compression, 1.0)?.v,
    ))
}

/// Steady-cycle report using precomputed cost geometry for `cfg`'s frequencies.
pub fn run_cycle_with(cfg: &OttoConfig, geometry: &CostGeometry) -> CycleReport {
    let (i_e, i_c) = cfg.cost_rates(geometry);
    assemble(cfg, i_e, i_c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Hot,
    Expansion,
    Cold,
    Compression,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Hot => "hot",
            Phase::Expansion => "expansion",
            Phase::Cold => "cold",
            Phase::Compression => "compression",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub nbar: f64,
    pub cycle: u64,
    pub phase: Phase,
}

/// Photon number over `cycles` cycles from `n0`, `per_stroke` samples per
/// stroke after the initial point. The last sample of each cycle is the
/// closed-form [`nbar_after_cycles`] value.
pub fn transient_trajectory(n0: f64, cycles: u64, cfg: &OttoConfig, per_stroke: usize) -> Result<Vec<TrajectorySample>> {
    cfg.validate()?;
    if !(n0 >= 0.0) {
        return Err(OttoError::InvalidInput(format!("n0 = {n0} must be >= 0")));
    }
    let per_stroke = per_stroke.max(1);
    let s = cfg.schedule;
    let k = cfg.kernel();
    let mut out = Vec::with_capacity(1 + cycles as usize * 4 * per_stroke);
    out.push(TrajectorySample {
        t: 0.0,
        nbar: n0,
        cycle: 0,
        phase: Phase::Hot,
    });
    let t_cycle = s.t_cycle();
    for c in 0..cycles {
        let start = k.after_cycles(n0, c);
        let t0 = c as f64 * t_cycle;
        let mut t_off = 0.0;
        let mut n_start = start;
        let strokes: [(Phase, f64, Option<&AtomBath>); 4] = [
            (Phase::Hot, s.t_h, Some(&cfg.hot)),
            (Phase::Expansion, s.t_we, None),
            (Phase::Cold, s.t_c, Some(&cfg.cold)),
            (Phase::Compression, s.t_wc, None),
        ];
        for (idx, (phase, dur, bath)) in strokes.into_iter().enumerate() {
            for j in 1..=per_stroke {
                let dt = dur * j as f64 / per_stroke as f64;
                let last_of_cycle = idx == 3 && j == per_stroke;
                let nbar = if last_of_cycle {
                    k.after_cycles(n0, c + 1)
                } else {
                    match bath {
                        Some(b) => nbar_evolve(n_start, dt, b),
                        None => n_start,
                    }
                };
                out.push(TrajectorySample {
                    t: t0 + t_off + dt,
                    nbar,
                    cycle: c,
                    phase,
                });
            }
            if let Some(b) = bath {
                n_start = nbar_evolve(n_start, dur, b);
            }
            t_off += dur;
        }
    }
    Ok(out)
}
