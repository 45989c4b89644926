//! Atom-stream baths.
//!
//! A bath is a stream of (ℓ+1)-level atoms with ℓ degenerate ground states.
//! Downstream only two scalars matter: the excitation weight `E = <e|ρ_R|e>`
//! and the ground-capture weight `G = <G|ρ_R|G>`, where `|G>` is the uniform
//! superposition of the ground states. Coherence in the ground space moves
//! `G` without touching the atomic populations, which shifts both the
//! temperature the oscillator relaxes to and the rate `Δ = G - E` at which
//! it gets there.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{OttoError, Result};

/// Relative tolerance used when comparing baths on `(E, Δ)`.
pub const BATH_REL_TOL: f64 = 1e-9;

/// Slack on the normalization `E + G <= 1` for values produced by arithmetic.
const NORM_SLACK: f64 = 1e-12;

/// Thermal atomic populations plus the ground-space overlap `<G|ρ_g|G>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermalAtomSpec {
    pub beta_r: f64,
    pub omega: f64,
    pub ell: u32,
    pub coherence_g: f64,
}

impl ThermalAtomSpec {
    /// Atoms without ground-space coherence, `<G|ρ_g|G> = 1/ℓ`.
    pub fn incoherent(beta_r: f64, omega: f64, ell: u32) -> Self {
        Self {
            beta_r,
            omega,
            ell,
            coherence_g: 1.0 / f64::from(ell.max(1)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(OttoError::InvalidInput("ground degeneracy must be >= 1".into()));
        }
        if !(self.beta_r >= 0.0) {
            return Err(OttoError::InvalidInput(format!("beta_R = {} must be >= 0", self.beta_r)));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(OttoError::InvalidInput(format!("omega = {} must be > 0", self.omega)));
        }
        if !(0.0..=1.0).contains(&self.coherence_g) {
            return Err(OttoError::InvalidInput(format!(
                "<G|rho_g|G> = {} outside [0, 1]",
                self.coherence_g
            )));
        }
        Ok(())
    }

    /// `Z = ℓ + exp(-β_R ω)`.
    pub fn partition_function(&self) -> f64 {
        f64::from(self.ell) + (-self.beta_r * self.omega).exp()
    }

    /// `p_e = exp(-β_R ω) / Z`.
    pub fn excited_population(&self) -> f64 {
        (-self.beta_r * self.omega).exp() / self.partition_function()
    }
}

/// One emulated bath, reduced to its two transition weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomBath {
    pub e: f64,
    pub g: f64,
    pub ell: u32,
    pub label: String,
    /// Atomic preparation this bath was built from, when known.
    pub provenance: Option<ThermalAtomSpec>,
}

impl AtomBath {
    pub fn new(e: f64, g: f64, ell: u32, label: impl Into<String>) -> Result<Self> {
        let bath = Self {
            e,
            g,
            ell,
            label: label.into(),
            provenance: None,
        };
        bath.validate()?;
        Ok(bath)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(OttoError::InvalidInput("ground degeneracy must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.e) || !(0.0..=1.0).contains(&self.g) {
            return Err(OttoError::InvalidInput(format!(
                "weights out of range: E = {}, G = {}",
                self.e, self.g
            )));
        }
        if self.e + self.g > 1.0 + NORM_SLACK {
            return Err(OttoError::InvalidInput(format!(
                "E + G = {} exceeds 1",
                self.e + self.g
            )));
        }
        if self.g <= self.e {
            return Err(OttoError::NonThermalizing { e: self.e, g: self.g });
        }
        Ok(())
    }

    /// Thermalization rate `Δ = G - E`.
    #[inline]
    pub fn delta(&self) -> f64 {
        self.g - self.e
    }

    /// Steady-state photon number `E / Δ`; stands in for the effective temperature.
    #[inline]
    pub fn nbar_ss(&self) -> f64 {
        nbar_ss(self)
    }

    /// Equality on `(E, Δ)` to relative tolerance `rel_tol`.
    pub fn approx_eq(&self, other: &AtomBath, rel_tol: f64) -> bool {
        rel_close(self.e, other.e, rel_tol) && rel_close(self.delta(), other.delta(), rel_tol)
    }
}

fn rel_close(a: f64, b: f64, rel_tol: f64) -> bool {
    (a - b).abs() <= rel_tol * a.abs().max(b.abs())
}

/// Builds the bath seen by the oscillator from a thermal atomic preparation.
///
/// `E = p_e` and `G = (1 - p_e) <G|ρ_g|G>`.
pub fn bath_from_spec(spec: &ThermalAtomSpec) -> Result<AtomBath> {
    spec.validate()?;
    let p_e = spec.excited_population();
    let g = (1.0 - p_e) * spec.coherence_g;
    let bath = AtomBath {
        e: p_e,
        g,
        ell: spec.ell,
        label: String::new(),
        provenance: Some(*spec),
    };
    bath.validate()?;
    Ok(bath)
}

/// Inverse temperature the oscillator relaxes to, `ln(G/E) / ω`.
///
/// A bath with `E = 0` relaxes to the vacuum and yields `+∞`.
pub fn effective_beta(bath: &AtomBath, omega: f64) -> f64 {
    if bath.e == 0.0 {
        return f64::INFINITY;
    }
    (bath.g / bath.e).ln() / omega
}

/// Steady-state mean photon number `E / (G - E)`.
pub fn nbar_ss(bath: &AtomBath) -> f64 {
    bath.e / bath.delta()
}

/// `βω` of a thermal oscillator state with mean photon number `nbar`.
pub fn beta_omega_from_nbar(nbar: f64) -> f64 {
    (1.0 / nbar).ln_1p()
}

/// Which member(s) of a pair carry ground-space coherence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    /// Both baths incoherent.
    #[serde(rename = "I")]
    Incoherent,
    /// Hot bath made from cold populations by adding coherence.
    #[serde(rename = "CH")]
    CoherentHot,
    /// Cold bath made from hot populations by adding coherence.
    #[serde(rename = "CC")]
    CoherentCold,
}

impl PairKind {
    pub const ALL: [PairKind; 3] = [PairKind::Incoherent, PairKind::CoherentHot, PairKind::CoherentCold];

    pub fn short_name(self) -> &'static str {
        match self {
            PairKind::Incoherent => "I",
            PairKind::CoherentHot => "CH",
            PairKind::CoherentCold => "CC",
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for PairKind {
    type Err = OttoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" => Ok(PairKind::Incoherent),
            "CH" => Ok(PairKind::CoherentHot),
            "CC" => Ok(PairKind::CoherentCold),
            other => Err(OttoError::InvalidInput(format!("unknown pair kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PairLabel {
    Kind(PairKind),
    Pi(f64),
    Custom,
}

impl fmt::Display for PairLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairLabel::Kind(k) => write!(f, "{k}"),
            PairLabel::Pi(pi) => write!(f, "pi={pi}"),
            PairLabel::Custom => f.write_str("custom"),
        }
    }
}

/// A hot/cold pair of baths sharing a construction recipe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BathPair {
    pub label: PairLabel,
    pub hot: AtomBath,
    pub cold: AtomBath,
    pub beta_h: f64,
    pub beta_c: f64,
    pub omega: f64,
    pub ell: u32,
}

/// Flat serialization of a [`BathPair`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub kind: String,
    pub beta_h: f64,
    pub beta_c: f64,
    pub omega: f64,
    pub ell: u32,
    #[serde(rename = "E_h")]
    pub e_h: f64,
    #[serde(rename = "G_h")]
    pub g_h: f64,
    #[serde(rename = "E_c")]
    pub e_c: f64,
    #[serde(rename = "G_c")]
    pub g_c: f64,
}

impl BathPair {
    /// A pair given directly by its weights; temperatures are derived from `omega`.
    pub fn custom(hot: AtomBath, cold: AtomBath, omega: f64) -> Result<Self> {
        hot.validate()?;
        cold.validate()?;
        if hot.ell != cold.ell {
            return Err(OttoError::InvalidInput("hot and cold degeneracies differ".into()));
        }
        Ok(Self {
            label: PairLabel::Custom,
            beta_h: effective_beta(&hot, omega),
            beta_c: effective_beta(&cold, omega),
            ell: hot.ell,
            hot,
            cold,
            omega,
        })
    }

    pub fn record(&self) -> PairRecord {
        PairRecord {
            kind: self.label.to_string(),
            beta_h: self.beta_h,
            beta_c: self.beta_c,
            omega: self.omega,
            ell: self.ell,
            e_h: self.hot.e,
            g_h: self.hot.g,
            e_c: self.cold.e,
            g_c: self.cold.g,
        }
    }

    pub fn approx_eq(&self, other: &BathPair, rel_tol: f64) -> bool {
        self.hot.approx_eq(&other.hot, rel_tol) && self.cold.approx_eq(&other.cold, rel_tol)
    }
}

/// Bath with given `E` and `Δ`, realized by thermal populations `p_e = E` and
/// the ground-space overlap that produces `G = E + Δ`.
fn realize(e: f64, delta: f64, omega: f64, ell: u32, label: &str) -> Result<AtomBath> {
    if delta <= 0.0 {
        return Err(OttoError::NonThermalizing { e, g: e + delta });
    }
    let g = e + delta;
    let coherence = g / (1.0 - e);
    if coherence > 1.0 + NORM_SLACK {
        return Err(OttoError::Infeasible { coherence });
    }
    // p_e = x / (ℓ + x) with x = exp(-β_R ω)
    let beta_r = if e > 0.0 {
        ((1.0 - e) / (f64::from(ell) * e)).ln() / omega
    } else {
        f64::INFINITY
    };
    let bath = AtomBath {
        e,
        g,
        ell,
        label: label.to_string(),
        provenance: Some(ThermalAtomSpec {
            beta_r,
            omega,
            ell,
            coherence_g: coherence.min(1.0),
        }),
    };
    bath.validate()?;
    Ok(bath)
}

fn incoherent_member(beta: f64, omega: f64, ell: u32, label: &str) -> Result<AtomBath> {
    let mut bath = bath_from_spec(&ThermalAtomSpec::incoherent(beta, omega, ell))?;
    bath.label = label.to_string();
    Ok(bath)
}

/// One of the three pairs sharing effective temperatures `β_h < β_c`.
///
/// * `I`: both incoherent.
/// * `CH`: both at the cold populations, `E_h = E_c = E_c^I`; the hot member
///   uses coherence and `Δ_h = Δ_h^I E_c^I / E_h^I`.
/// * `CC`: both at the hot populations, `E_h = E_c = E_h^I`; the cold member
///   uses coherence and `Δ_c = Δ_c^I E_h^I / E_c^I`.
///
/// The printed bath table lists `Δ_h E_h/E_c` for the CH hot bath; that form
/// does not keep `E/Δ` fixed, so the ratio `E_c/E_h` is used here.
pub fn make_pair(kind: PairKind, beta_h: f64, beta_c: f64, omega: f64, ell: u32) -> Result<BathPair> {
    if !(beta_c > beta_h && beta_h >= 0.0) {
        return Err(OttoError::InvalidInput(format!(
            "need beta_c > beta_h >= 0, got beta_h = {beta_h}, beta_c = {beta_c}"
        )));
    }
    let hot_i = incoherent_member(beta_h, omega, ell, "hot")?;
    let cold_i = incoherent_member(beta_c, omega, ell, "cold")?;
    let (hot, cold) = match kind {
        PairKind::Incoherent => (hot_i, cold_i),
        PairKind::CoherentHot => {
            let e = cold_i.e;
            let d_h = hot_i.delta() * cold_i.e / hot_i.e;
            (realize(e, d_h, omega, ell, "hot")?, cold_i)
        }
        PairKind::CoherentCold => {
            let e = hot_i.e;
            let d_c = cold_i.delta() * hot_i.e / cold_i.e;
            (hot_i, realize(e, d_c, omega, ell, "cold")?)
        }
    };
    Ok(BathPair {
        label: PairLabel::Kind(kind),
        hot,
        cold,
        beta_h,
        beta_c,
        omega,
        ell,
    })
}

/// [`make_pair`] with temperatures given as steady-state photon numbers.
pub fn make_pair_from_nbar(kind: PairKind, nbar_h: f64, nbar_c: f64, omega: f64, ell: u32) -> Result<BathPair> {
    if !(nbar_h > 0.0 && nbar_c > 0.0) {
        return Err(OttoError::InvalidInput(format!(
            "photon numbers must be positive, got {nbar_h}, {nbar_c}"
        )));
    }
    make_pair(
        kind,
        beta_omega_from_nbar(nbar_h) / omega,
        beta_omega_from_nbar(nbar_c) / omega,
        omega,
        ell,
    )
}

/// Interpolates between CH (`π = 0`) and CC (`π = 1`).
///
/// Both members share `E^π = π E_h^I + (1-π) E_c^I` and each keeps the
/// effective temperature of the incoherent `base`.
pub fn make_pair_pi(pi: f64, base: &BathPair) -> Result<BathPair> {
    if base.label != PairLabel::Kind(PairKind::Incoherent) {
        return Err(OttoError::InvalidInput("pi family needs an incoherent base pair".into()));
    }
    if !(0.0..=1.0).contains(&pi) {
        return Err(OttoError::InvalidInput(format!("pi = {pi} outside [0, 1]")));
    }
    let (hot_i, cold_i) = (&base.hot, &base.cold);
    let e = pi * hot_i.e + (1.0 - pi) * cold_i.e;
    let d_h = e * hot_i.delta() / hot_i.e;
    let d_c = e * cold_i.delta() / cold_i.e;
    Ok(BathPair {
        label: PairLabel::Pi(pi),
        hot: realize(e, d_h, base.omega, base.ell, "hot")?,
        cold: realize(e, d_c, base.omega, base.ell, "cold")?,
        beta_h: base.beta_h,
        beta_c: base.beta_c,
        omega: base.omega,
        ell: base.ell,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    #[test]
    fn ln2_two_level_example() {
        let spec = ThermalAtomSpec {
            beta_r: 1.0,
            omega: LN_2,
            ell: 2,
            coherence_g: 0.5,
        };
        let bath = bath_from_spec(&spec).unwrap();
        assert_relative_eq!(bath.e, 0.2, max_relative = 1e-15);
        assert_relative_eq!(bath.g, 0.4, max_relative = 1e-15);
        assert_relative_eq!(bath.delta(), 0.2, max_relative = 1e-14);
        assert_relative_eq!(nbar_ss(&bath), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn incoherent_atoms_keep_their_temperature() {
        for beta_r in [0.0, 0.3, 1.0, 4.0] {
            let bath = bath_from_spec(&ThermalAtomSpec::incoherent(beta_r, 1.7, 2)).unwrap();
            assert_relative_eq!(effective_beta(&bath, 1.7), beta_r, epsilon = 1e-13);
        }
    }

    #[test]
    fn vanishing_delta_is_rejected() {
        // <G|ρ_g|G> -> e^{-1}/2 drives Δ to zero at β_R ω = 1.
        let edge = (-1.0f64).exp() / 2.0;
        let hot = bath_from_spec(&ThermalAtomSpec {
            beta_r: 1.0,
            omega: 1.0,
            ell: 2,
            coherence_g: edge * (1.0 + 1e-6),
        })
        .unwrap();
        assert!(effective_beta(&hot, 1.0) < 1e-5);
        let err = bath_from_spec(&ThermalAtomSpec {
            beta_r: 1.0,
            omega: 1.0,
            ell: 2,
            coherence_g: edge * (1.0 - 1e-9),
        })
        .unwrap_err();
        assert!(matches!(err, OttoError::NonThermalizing { .. }));
    }

    #[test]
    fn effective_beta_examples() {
        let bath = AtomBath::new(0.2, 0.4, 2, "").unwrap();
        assert_relative_eq!(effective_beta(&bath, LN_2), 1.0, max_relative = 1e-15);
        for x in [0.1f64, 1.0, 3.0] {
            let b = AtomBath::new(0.4 * (-x).exp(), 0.4, 2, "").unwrap();
            assert_relative_eq!(effective_beta(&b, 1.0), x, max_relative = 1e-13);
        }
        let full = bath_from_spec(&ThermalAtomSpec {
            beta_r: 0.7,
            omega: 1.3,
            ell: 3,
            coherence_g: 1.0,
        })
        .unwrap();
        assert_relative_eq!(effective_beta(&full, 1.3), 0.7 + 3f64.ln() / 1.3, max_relative = 1e-13);
    }

    #[test]
    fn nbar_ss_examples() {
        assert_relative_eq!(nbar_ss(&AtomBath::new(0.2, 0.3, 2, "").unwrap()), 2.0, max_relative = 1e-14);
        assert_eq!(nbar_ss(&AtomBath::new(0.0, 0.3, 2, "").unwrap()), 0.0);
        let b = AtomBath::new(0.2, 0.4, 2, "").unwrap();
        assert_relative_eq!(nbar_ss(&b), 1.0 / (LN_2.exp() - 1.0), max_relative = 1e-14);
    }

    #[test]
    fn rejects_unnormalized_and_non_thermalizing() {
        assert!(matches!(
            AtomBath::new(0.4, 0.3, 2, ""),
            Err(OttoError::NonThermalizing { .. })
        ));
        assert!(AtomBath::new(0.5, 0.6, 2, "").is_err());
        assert!(AtomBath::new(-0.1, 0.6, 2, "").is_err());
    }

    #[test]
    fn pairs_share_effective_temperatures() {
        let (bh, bc) = (0.4, 1.0);
        let base = make_pair(PairKind::Incoherent, bh, bc, 1.0, 2).unwrap();
        for kind in PairKind::ALL {
            let pair = make_pair(kind, bh, bc, 1.0, 2).unwrap();
            assert_relative_eq!(nbar_ss(&pair.hot), nbar_ss(&base.hot), max_relative = 1e-12);
            assert_relative_eq!(nbar_ss(&pair.cold), nbar_ss(&base.cold), max_relative = 1e-12);
            assert_relative_eq!(effective_beta(&pair.hot, 1.0), bh, max_relative = 1e-12);
            assert_relative_eq!(effective_beta(&pair.cold, 1.0), bc, max_relative = 1e-12);
        }
        let ch = make_pair(PairKind::CoherentHot, bh, bc, 1.0, 2).unwrap();
        let cc = make_pair(PairKind::CoherentCold, bh, bc, 1.0, 2).unwrap();
        assert!(ch.hot.delta() < base.hot.delta());
        assert!(cc.cold.delta() > base.cold.delta());
        assert_eq!(ch.hot.e, base.cold.e);
        assert_eq!(cc.cold.e, base.hot.e);
    }

    #[test]
    fn preset_pair_inverts_photon_numbers() {
        // Oracle: βω = ln(1 + 1/n̄), then forward through thermal atoms.
        for (nh, nc) in [(2.0, 0.55), (5.0, 0.1)] {
            let xh = (1.0f64 + 1.0 / nh).ln();
            let xc = (1.0f64 + 1.0 / nc).ln();
            let pair = make_pair(PairKind::Incoherent, xh, xc, 1.0, 2).unwrap();
            assert_relative_eq!(pair.hot.e / pair.hot.delta(), nh, max_relative = 1e-12);
            assert_relative_eq!(pair.cold.e / pair.cold.delta(), nc, max_relative = 1e-12);
        }
        let pair = make_pair_from_nbar(PairKind::Incoherent, 2.0, 0.55, 1.0, 2).unwrap();
        assert_relative_eq!(pair.hot.e, 0.25, max_relative = 1e-14);
    }

    #[test]
    fn cooling_past_the_limit_is_infeasible() {
        // Cold target hotter than ω/ln ℓ cannot be reached from very hot populations.
        let err = make_pair(PairKind::CoherentCold, 0.01, 3.0, 1.0, 2).unwrap_err();
        assert!(matches!(err, OttoError::Infeasible { .. }));
    }

    #[test]
    fn pi_family_endpoints() {
        let base = make_pair_from_nbar(PairKind::Incoherent, 2.0, 0.55, 1.0, 2).unwrap();
        let ch = make_pair_from_nbar(PairKind::CoherentHot, 2.0, 0.55, 1.0, 2).unwrap();
        let cc = make_pair_from_nbar(PairKind::CoherentCold, 2.0, 0.55, 1.0, 2).unwrap();
        assert!(make_pair_pi(0.0, &base).unwrap().approx_eq(&ch, 1e-14));
        assert!(make_pair_pi(1.0, &base).unwrap().approx_eq(&cc, 1e-14));
        assert!(make_pair_pi(0.5, &ch).is_err());
        assert!(make_pair_pi(1.5, &base).is_err());
    }

    #[test]
    fn pair_record_is_flat() {
        let pair = make_pair_from_nbar(PairKind::CoherentCold, 2.0, 0.55, 1.0, 2).unwrap();
        let rec = pair.record();
        assert_eq!(rec.kind, "CC");
        assert_eq!(rec.e_c, pair.cold.e);
        assert!(matches!("cc".parse::<PairKind>(), Ok(PairKind::CoherentCold)));
    }

    proptest! {
        #[test]
        fn spec_round_trip(beta_r in 0.0f64..5.0, omega in 0.1f64..4.0, ell in 1u32..6, u in 0.0f64..1.0) {
            let min_c = (-beta_r * omega).exp() / f64::from(ell);
            let coherence_g = min_c + (1.0 - min_c) * (0.01 + 0.99 * u);
            prop_assume!(coherence_g <= 1.0);
            let spec = ThermalAtomSpec { beta_r, omega, ell, coherence_g };
            let bath = bath_from_spec(&spec).unwrap();
            let expected = beta_r + (f64::from(ell) * coherence_g).ln() / omega;
            let got = effective_beta(&bath, omega);
            prop_assert!((got - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }

        #[test]
        fn cooling_limit(beta_r in 0.0f64..5.0, omega in 0.1f64..4.0, ell in 2u32..5) {
            let bath = bath_from_spec(&ThermalAtomSpec { beta_r, omega, ell, coherence_g: 1.0 }).unwrap();
            let t = 1.0 / effective_beta(&bath, omega);
            prop_assert!(t <= omega / f64::from(ell).ln() * (1.0 + 1e-12));
        }

        #[test]
        fn pairs_preserve_photon_numbers(nh in 1.0f64..5.0, frac in 0.05f64..0.9) {
            let nc = nh * frac;
            let base = make_pair_from_nbar(PairKind::Incoherent, nh, nc, 1.0, 2).unwrap();
            for kind in [PairKind::CoherentHot, PairKind::CoherentCold] {
                match make_pair_from_nbar(kind, nh, nc, 1.0, 2) {
                    Ok(p) => {
                        prop_assert!((nbar_ss(&p.hot) / nbar_ss(&base.hot) - 1.0).abs() < 1e-12);
                        prop_assert!((nbar_ss(&p.cold) / nbar_ss(&base.cold) - 1.0).abs() < 1e-12);
                    }
                    Err(e) => { let ok = matches!(e, OttoError::Infeasible { .. }); prop_assert!(ok) },
                }
            }
        }

        #[test]
        fn pi_family_is_continuous(pi in 0.0f64..0.999) {
            let base = make_pair_from_nbar(PairKind::Incoherent, 2.0, 0.55, 1.0, 2).unwrap();
            let a = make_pair_pi(pi, &base).unwrap();
            let b = make_pair_pi(pi + 1e-6, &base).unwrap();
            prop_assert!((a.hot.e - b.hot.e).abs() < 1e-6);
            prop_assert!((a.cold.delta() - b.cold.delta()).abs() < 1e-5);
            prop_assert!((nbar_ss(&a.hot) / nbar_ss(&base.hot) - 1.0).abs() < 1e-12);
            prop_assert!((nbar_ss(&a.cold) / nbar_ss(&base.cold) - 1.0).abs() < 1e-12);
        }
    }
}
