//! TOML experiment configuration and the resolved run settings echoed into
//! every output.

use std::path::Path;

use anyhow::{bail, Context};
use otto_core::verify::Tolerances;
use otto_core::{make_pair_from_nbar, AtomBath, BathPair, PairKind};
use serde::{Deserialize, Serialize};

/// Explicit transition weights, bypassing the temperature-based presets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomWeights {
    pub hot_e: f64,
    pub hot_g: f64,
    pub cold_e: f64,
    pub cold_g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathSection {
    pub nbar_hot: f64,
    pub nbar_cold: f64,
    pub ell: u32,
    /// Transition frequency at which the effective temperatures are quoted.
    pub omega: f64,
    pub custom: Option<CustomWeights>,
}

impl Default for BathSection {
    fn default() -> Self {
        Self {
            nbar_hot: 2.0,
            nbar_cold: 0.55,
            ell: 2,
            omega: 1.0,
            custom: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EngineSection {
    pub omega_h: f64,
    pub omega_c: f64,
    pub kappa: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self {
            omega_h: 1.0,
            omega_c: 0.5,
            kappa: 1.0,
            p: 0.5,
            q: 0.5,
            r: 0.5,
        }
    }
}

/// Log-spaced cycle-time grid for `curve` and the `optimize` power curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            t_min: 0.1,
            t_max: 1000.0,
            points: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransientSection {
    pub n0: f64,
    pub t_cycle: f64,
    /// Defaults to `ceil(50 / (Δ_h t_h + Δ_c t_c))` per pair.
    pub cycles: Option<u64>,
    pub per_stroke: usize,
}

impl Default for TransientSection {
    fn default() -> Self {
        Self {
            n0: 0.0,
            t_cycle: 8.0,
            cycles: None,
            per_stroke: 10,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeSection {
    pub start: [f64; 3],
    pub step: f64,
    pub rel_tol: f64,
    pub max_rounds: usize,
    pub t_lo: f64,
    pub t_hi: f64,
    pub t_points: usize,
}

impl Default for OptimizeSection {
    fn default() -> Self {
        Self {
            start: [0.5; 3],
            step: 0.02,
            rel_tol: 1e-8,
            max_rounds: 20,
            t_lo: 1e-2,
            t_hi: 1e3,
            t_points: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PiSection {
    pub points: usize,
    /// Cycle time at which per-cycle work is compared.
    pub t_reference: f64,
}

impl Default for PiSection {
    fn default() -> Self {
        Self {
            points: 21,
            t_reference: 8.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub draws: usize,
    pub t_cycle: f64,
    pub oracle_horizon: f64,
    pub tolerances: Tolerances,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            draws: 20,
            t_cycle: 8.0,
            oracle_horizon: 20.0,
            tolerances: Tolerances::default(),
        }
    }
}

/// Contents of a `--config` file. Every section and key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub bath: BathSection,
    pub engine: EngineSection,
    pub sweep: SweepSection,
    pub transient: TransientSection,
    pub optimize: OptimizeSection,
    pub pi: PiSection,
    pub verify: VerifySection,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// File config with command-line overrides applied. This is what gets
/// hashed and echoed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub pairs: Vec<String>,
    pub seed: u64,
    #[serde(flatten)]
    pub file: FileConfig,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, pairs: Option<Vec<PairKind>>, grid: Option<usize>, seed: u64) -> anyhow::Result<Self> {
        let mut file = file;
        if let Some(n) = grid {
            if n < 2 {
                bail!("--grid must be at least 2, got {n}");
            }
            file.sweep.points = n;
            file.pi.points = n;
        }
        let pairs = match (&file.bath.custom, pairs) {
            (Some(_), Some(_)) => bail!("--pairs cannot be combined with [bath.custom] weights"),
            (Some(_), None) => vec!["custom".to_string()],
            (None, p) => p
                .unwrap_or_else(|| PairKind::ALL.to_vec())
                .iter()
                .map(|k| k.short_name().to_string())
                .collect(),
        };
        Ok(Self { pairs, seed, file })
    }

    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn bath_pairs(&self) -> anyhow::Result<Vec<BathPair>> {
        let b = &self.file.bath;
        if let Some(w) = b.custom {
            let hot = AtomBath::new(w.hot_e, w.hot_g, b.ell, "hot")?;
            let cold = AtomBath::new(w.cold_e, w.cold_g, b.ell, "cold")?;
            return Ok(vec![BathPair::custom(hot, cold, b.omega)?]);
        }
        self.pairs
            .iter()
            .map(|name| {
                let kind: PairKind = name.parse()?;
                make_pair_from_nbar(kind, b.nbar_hot, b.nbar_cold, b.omega, b.ell)
                    .with_context(|| format!("building pair {kind}"))
            })
            .collect()
    }
}

/// Parsed `--pairs` list.
#[derive(Debug, Clone, PartialEq)]
pub struct PairList(pub Vec<PairKind>);

pub fn parse_pairs(s: &str) -> Result<PairList, String> {
    let mut out = Vec::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let kind: PairKind = part.parse().map_err(|e| format!("{e}"))?;
        if !out.contains(&kind) {
            out.push(kind);
        }
    }
    if out.is_empty() {
        return Err("no pairs given".into());
    }
    Ok(PairList(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default_preset() {
        let cfg: FileConfig = toml::from_str("").unwrap();
        assert_eq!(cfg, FileConfig::default());
        assert_eq!(cfg.bath.nbar_hot, 2.0);
        assert_eq!(cfg.engine.omega_c, 0.5);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("[engine]\nomega = 2.0\n").is_err());
    }

    #[test]
    fn partial_sections_keep_defaults() {
        let cfg: FileConfig = toml::from_str("[engine]\nkappa = 2.5\n[verify.tolerances]\nquadrature = 1e-15\n").unwrap();
        assert_eq!(cfg.engine.kappa, 2.5);
        assert_eq!(cfg.engine.omega_h, 1.0);
        assert_eq!(cfg.verify.tolerances.quadrature, 1e-15);
        assert_eq!(cfg.verify.tolerances.zeta, 1e-12);
    }

    #[test]
    fn pair_lists() {
        assert_eq!(parse_pairs("cc, I,CC").unwrap().0, vec![PairKind::CoherentCold, PairKind::Incoherent]);
        assert!(parse_pairs("I,XX").is_err());
        assert!(parse_pairs("").is_err());
    }

    #[test]
    fn hash_tracks_every_override() {
        let base = RunConfig::resolve(FileConfig::default(), None, None, 1).unwrap();
        let seeded = RunConfig::resolve(FileConfig::default(), None, None, 2).unwrap();
        let gridded = RunConfig::resolve(FileConfig::default(), None, Some(50), 1).unwrap();
        let fewer = RunConfig::resolve(FileConfig::default(), Some(vec![PairKind::Incoherent]), None, 1).unwrap();
        let hashes = [base.hash(), seeded.hash(), gridded.hash(), fewer.hash()];
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(hashes[i], hashes[j]);
            }
        }
        assert_eq!(base.hash(), RunConfig::resolve(FileConfig::default(), None, None, 1).unwrap().hash());
    }

    #[test]
    fn custom_weights_are_validated() {
        let mut file = FileConfig::default();
        file.bath.custom = Some(CustomWeights {
            hot_e: 0.3,
            hot_g: 0.2,
            cold_e: 0.1,
            cold_g: 0.5,
        });
        let run = RunConfig::resolve(file, None, None, 0).unwrap();
        assert_eq!(run.pairs, vec!["custom"]);
        let err = run.bath_pairs().unwrap_err();
        assert!(format!("{err:#}").contains("does not thermalize"));
    }
}
