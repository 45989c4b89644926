//! Closed-form sensitivities of the steady cycle and the bath-comparison
//! orderings they imply.
//!
//! Every derivative is taken at fixed effective temperature: `Δ` varies
//! while `E` co-varies so that `a = E/Δ` is constant. With
//! `x = Δt`, `m = 1 - e^{-x}`, `S = x_h + x_c`, `D = 1 - e^{-S}` and
//! `A = a_h - a_c`:
//!
//! | quantity | `∂/∂Δ_h` | `∂/∂Δ_c` |
//! |---|---|---|
//! | `n̄_h - n̄_c` | `A α_h`, `α_h = t_h e^{-x_h} m_c² / D²` | `A α_c`, `α_c = t_c e^{-x_c} m_h² / D²` |
//! | `n̄_sc` | `+A γ_h`, `γ_h = t_h m_c e^{-S} / D²` | `-A γ_c`, `γ_c = t_c m_h e^{-x_c} / D²` |
//! | `n̄_h` | `+A ξ_h`, `ξ_h = t_h m_c e^{-x_h} / D²` | `-A ξ_c`, `ξ_c = t_c m_h e^{-S} / D²` |
//! | `ζ_h`, `ζ_c` | `-t_h a_c e^{-x_h} / (m_h² A)` | `-t_c a_h e^{-x_c} / (m_c² A)` |
//!
//! where `ζ_h = n̄_h/(n̄_h - n̄_c) = ½ + ½(a_h coth(x_c/2) + a_c coth(x_h/2))/A`
//! and `ζ_c = ζ_h - 1`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::cycle::{run_cycle_with, CostGeometry, HeatKernel, OttoConfig};
use crate::error::{OttoError, Result};
use crate::precise::{constrained_derivative, Quantity, Rate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeReport {
    pub alpha_h: f64,
    pub alpha_c: f64,
    pub gamma_h: f64,
    pub gamma_c: f64,
    pub xi_h: f64,
    pub xi_c: f64,
    pub zeta_h: f64,
    pub zeta_c: f64,
    pub dzeta_d_delta_h: f64,
    pub dzeta_d_delta_c: f64,
    /// `a_h - a_c`.
    pub temperature_gap: f64,
}

/// `coth(x/2) = (2 - m)/m`.
fn coth_half(m: f64) -> f64 {
    (2.0 - m) / m
}

pub fn derivative_report(k: &HeatKernel) -> DerivativeReport {
    let p = k.parts();
    let d2 = p.d * p.d;
    let gap = k.target_h - k.target_c;
    let zeta_h = 0.5 + 0.5 * (k.target_h * coth_half(p.mc) + k.target_c * coth_half(p.mh)) / gap;
    DerivativeReport {
        alpha_h: k.t_h * p.eh * p.mc * p.mc / d2,
        alpha_c: k.t_c * p.ec * p.mh * p.mh / d2,
        gamma_h: k.t_h * p.mc * p.es / d2,
        gamma_c: k.t_c * p.mh * p.ec / d2,
        xi_h: k.t_h * p.mc * p.eh / d2,
        xi_c: k.t_c * p.mh * p.es / d2,
        zeta_h,
        zeta_c: zeta_h - 1.0,
        dzeta_d_delta_h: -k.t_h * k.target_c * p.eh / (p.mh * p.mh * gap),
        dzeta_d_delta_c: -k.t_c * k.target_h * p.ec / (p.mc * p.mc * gap),
        temperature_gap: gap,
    }
}

/// `(∂/∂Δ_h, ∂/∂Δ_c)` of `n̄_h - n̄_c`.
pub fn work_derivatives(cfg: &OttoConfig) -> (f64, f64) {
    let r = derivative_report(&cfg.kernel());
    (r.temperature_gap * r.alpha_h, r.temperature_gap * r.alpha_c)
}

/// `(∂n̄_sc/∂Δ_h, ∂n̄_sc/∂Δ_c, ∂n̄_h/∂Δ_h, ∂n̄_h/∂Δ_c)`.
pub fn cost_derivatives(cfg: &OttoConfig) -> (f64, f64, f64, f64) {
    let r = derivative_report(&cfg.kernel());
    let g = r.temperature_gap;
    (g * r.gamma_h, -g * r.gamma_c, g * r.xi_h, -g * r.xi_c)
}

/// `∂P/∂Δ_h = (t_h/t_cycle) A e^{-x_h} m_c / D² · B`,
/// `B = (ω_h - ω_c) m_c - I_e - I_c e^{-x_c}`.
pub fn power_derivative_hot(k: &HeatKernel, d_omega: f64, i_e: f64, i_c: f64, t_cycle: f64) -> f64 {
    let p = k.parts();
    let b = d_omega * p.mc - i_e - i_c * p.ec;
    k.t_h / t_cycle * (k.target_h - k.target_c) * p.eh * p.mc / (p.d * p.d) * b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerCondition {
    Holds,
    Fails,
    /// `ω_h - ω_c <= I_e`: the threshold is not positive.
    Inapplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerVerdict {
    pub condition: PowerCondition,
    /// `(ω_h - ω_c + I_c)/(ω_h - ω_c - I_e)`, NaN when inapplicable.
    pub threshold: f64,
    pub exp_x_c: f64,
    pub dp_analytic: f64,
    pub dp_numeric: f64,
}

impl PowerVerdict {
    pub fn sign_agrees(&self) -> bool {
        self.dp_analytic.signum() == self.dp_numeric.signum()
    }

    /// The condition is equivalent to `∂P/∂Δ_h > 0` whenever it applies.
    pub fn condition_consistent(&self) -> bool {
        match self.condition {
            PowerCondition::Holds => self.dp_analytic > 0.0,
            PowerCondition::Fails | PowerCondition::Inapplicable => self.dp_analytic <= 0.0,
        }
    }
}

/// Tests `e^{Δ_c t_c} > (Δω + I_c)/(Δω - I_e)` and checks `∂P/∂Δ_h`
/// against an extended-precision finite difference.
pub fn power_monotonicity(cfg: &OttoConfig, i_e: f64, i_c: f64) -> PowerVerdict {
    let k = cfg.kernel();
    let d_omega = cfg.omega_h - cfg.omega_c;
    let t_cycle = cfg.t_cycle();
    let exp_x_c = k.x_c().exp();
    let (condition, threshold) = if d_omega > i_e {
        let th = (d_omega + i_c) / (d_omega - i_e);
        (if exp_x_c > th { PowerCondition::Holds } else { PowerCondition::Fails }, th)
    } else {
        (PowerCondition::Inapplicable, f64::NAN)
    };
    let dp_numeric = constrained_derivative(
        &k,
        Rate::Hot,
        Quantity::Power {
            d_omega,
            i_e,
            i_c,
            t_cycle,
        },
    );
    PowerVerdict {
        condition,
        threshold,
        exp_x_c,
        dp_analytic: power_derivative_hot(&k, d_omega, i_e, i_c, t_cycle),
        dp_numeric,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderingVerdict {
    pub eta_reference: f64,
    pub eta_coherent: f64,
    /// `η_coherent` relative to `η_reference` as implied by the sign of `∂ζ/∂Δ`.
    pub implied: Ordering,
    pub observed: Ordering,
}

const SAME_TEMPERATURE_TOL: f64 = 1e-9;

/// Compares efficiencies of two configurations sharing effective
/// temperatures, schedule and frequencies.
///
/// The cost term of `η` is `(ζ_h I_e + ζ_c I_c)/ω_h` with `ζ_h - ζ_c = 1`,
/// so `η` moves opposite to `ζ`. Since `∂ζ/∂Δ` has the sign of `-A` in both
/// rates, raising either rate raises `η` for a working engine.
pub fn efficiency_ordering(reference: &OttoConfig, coherent: &OttoConfig, geometry: &CostGeometry) -> Result<OrderingVerdict> {
    let (kr, kc) = (reference.kernel(), coherent.kernel());
    let close = |a: f64, b: f64| (a - b).abs() <= SAME_TEMPERATURE_TOL * a.abs().max(b.abs());
    if !close(kr.target_h, kc.target_h) || !close(kr.target_c, kc.target_c) {
        return Err(OttoError::InvalidInput("configurations differ in effective temperature".into()));
    }
    if reference.schedule != coherent.schedule
        || reference.omega_h != coherent.omega_h
        || reference.omega_c != coherent.omega_c
        || reference.kappa != coherent.kappa
    {
        return Err(OttoError::InvalidInput("configurations differ beyond the baths".into()));
    }
    let rate_moves = [kc.rate_h.partial_cmp(&kr.rate_h), kc.rate_c.partial_cmp(&kr.rate_c)];
    let mut direction = Ordering::Equal;
    for m in rate_moves.into_iter().flatten() {
        if m == Ordering::Equal {
            continue;
        }
        if direction != Ordering::Equal && direction != m {
            return Err(OttoError::InvalidInput("rates move in opposite directions".into()));
        }
        direction = m;
    }
    let r = derivative_report(&kr);
    let zeta_slope = if kc.rate_h != kr.rate_h { r.dzeta_d_delta_h } else { r.dzeta_d_delta_c };
    let (i_e, i_c) = reference.cost_rates(geometry);
    // η change ∝ -(ζ change)(I_e + I_c); ζ change has sign(slope)·direction.
    let implied = if direction == Ordering::Equal || i_e + i_c == 0.0 || zeta_slope == 0.0 {
        Ordering::Equal
    } else if (zeta_slope < 0.0) == (direction == Ordering::Greater) {
        Ordering::Greater
    } else {
        Ordering::Less
    };
    let eta_reference = run_cycle_with(reference, geometry).eta;
    let eta_coherent = run_cycle_with(coherent, geometry).eta;
    let observed = eta_coherent
        .partial_cmp(&eta_reference)
        .ok_or_else(|| OttoError::InconsistentOrdering(format!("undefined efficiency {eta_reference} / {eta_coherent}")))?;
    if observed != implied {
        return Err(OttoError::InconsistentOrdering(format!(
            "dzeta implies {implied:?} but eta_coherent = {eta_coherent} vs eta_reference = {eta_reference}"
        )));
    }
    Ok(OrderingVerdict {
        eta_reference,
        eta_coherent,
        implied,
        observed,
    })
}

/// One analytic/numeric comparison from [`derivative_checks`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeCheck {
    pub name: &'static str,
    pub analytic: f64,
    pub numeric: f64,
}

impl DerivativeCheck {
    pub fn rel_error(&self) -> f64 {
        if self.analytic == self.numeric {
            0.0
        } else {
            (self.analytic - self.numeric).abs() / self.numeric.abs()
        }
    }
}

/// All closed-form derivatives next to constrained finite differences.
pub fn derivative_checks(k: &HeatKernel) -> Vec<DerivativeCheck> {
    let r = derivative_report(k);
    let g = r.temperature_gap;
    let cases = [
        ("d(dn)/dDelta_h", g * r.alpha_h, Rate::Hot, Quantity::DeltaNbar),
        ("d(dn)/dDelta_c", g * r.alpha_c, Rate::Cold, Quantity::DeltaNbar),
        ("dn_sc/dDelta_h", g * r.gamma_h, Rate::Hot, Quantity::NbarSc),
        ("dn_sc/dDelta_c", -g * r.gamma_c, Rate::Cold, Quantity::NbarSc),
        ("dn_h/dDelta_h", g * r.xi_h, Rate::Hot, Quantity::NbarH),
        ("dn_h/dDelta_c", -g * r.xi_c, Rate::Cold, Quantity::NbarH),
        ("dzeta_h/dDelta_h", r.dzeta_d_delta_h, Rate::Hot, Quantity::ZetaH),
        ("dzeta_h/dDelta_c", r.dzeta_d_delta_c, Rate::Cold, Quantity::ZetaH),
        ("dzeta_c/dDelta_h", r.dzeta_d_delta_h, Rate::Hot, Quantity::ZetaC),
        ("dzeta_c/dDelta_c", r.dzeta_d_delta_c, Rate::Cold, Quantity::ZetaC),
    ];
    cases
        .into_iter()
        .map(|(name, analytic, rate, q)| DerivativeCheck {
            name,
            analytic,
            numeric: constrained_derivative(k, rate, q),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{make_pair_from_nbar, AtomBath, PairKind};
    use crate::cycle::StrokeSchedule;

    fn kernel() -> HeatKernel {
        HeatKernel {
            target_h: 2.0,
            rate_h: 0.3,
            target_c: 0.5,
            rate_c: 0.6,
            t_h: 2.5,
            t_c: 1.5,
        }
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        for c in derivative_checks(&kernel()) {
            assert!(c.rel_error() < 1e-6, "{}: {} vs {}", c.name, c.analytic, c.numeric);
        }
    }

    #[test]
    fn zeta_forms_agree() {
        let k = kernel();
        let r = derivative_report(&k);
        assert!((r.zeta_h - k.nbar_h() / k.delta_nbar()).abs() < 1e-13);
        assert_eq!(r.zeta_h - r.zeta_c, 1.0);
    }

    #[test]
    fn equal_temperatures_zero_work_derivative() {
        let hot = AtomBath::new(0.2, 0.4, 2, "").unwrap();
        let cold = AtomBath::new(0.1, 0.2, 2, "").unwrap();
        let cfg = OttoConfig::new(hot, cold, 1.0, 0.5, StrokeSchedule::quarters(4.0).unwrap(), 1.0).unwrap();
        assert_eq!(work_derivatives(&cfg), (0.0, 0.0));
    }

    #[test]
    fn long_hot_stroke_decouples_cold_rate() {
        let k = HeatKernel { t_h: 200.0, ..kernel() };
        let r = derivative_report(&k);
        assert!(r.xi_c < 1e-25);
    }

    #[test]
    fn orderings_for_default_preset() {
        let schedule = StrokeSchedule::quarters(6.0).unwrap();
        let build = |kind| {
            let p = make_pair_from_nbar(kind, 2.0, 0.55, 1.0, 2).unwrap();
            OttoConfig::new(p.hot, p.cold, 1.0, 0.5, schedule, 1.0).unwrap()
        };
        let geo = CostGeometry::new(1.0, 0.5).unwrap();
        let (i, ch, cc) = (build(PairKind::Incoherent), build(PairKind::CoherentHot), build(PairKind::CoherentCold));
        assert_eq!(efficiency_ordering(&i, &cc, &geo).unwrap().observed, Ordering::Greater);
        assert_eq!(efficiency_ordering(&i, &ch, &geo).unwrap().observed, Ordering::Less);
        let (ie, ic) = i.cost_rates(&geo);
        let v = power_monotonicity(&i, ie, ic);
        assert!(v.sign_agrees() && v.condition_consistent());
        assert!((v.dp_analytic - v.dp_numeric).abs() <= 1e-6 * v.dp_numeric.abs());
    }

    #[test]
    fn inapplicable_when_costs_dominate() {
        let schedule = StrokeSchedule::quarters(0.4).unwrap();
        let p = make_pair_from_nbar(PairKind::Incoherent, 2.0, 0.55, 1.0, 2).unwrap();
        let cfg = OttoConfig::new(p.hot, p.cold, 1.0, 0.5, schedule, 1.0).unwrap();
        let geo = CostGeometry::new(1.0, 0.5).unwrap();
        let (ie, ic) = cfg.cost_rates(&geo);
        let v = power_monotonicity(&cfg, ie, ic);
        assert_eq!(v.condition, PowerCondition::Inapplicable);
        assert!(v.dp_analytic < 0.0 && v.sign_agrees());
    }
}
