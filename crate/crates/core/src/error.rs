use thiserror::Error;

/// Failures raised by the engine model, the oracles and the optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OttoError {
    /// `G <= E`: the oscillator heats without bound instead of thermalizing.
    #[error("bath does not thermalize: G = {g} <= E = {e}")]
    NonThermalizing { e: f64, g: f64 },

    /// Realizing the bath would need a ground-space overlap above one.
    #[error("bath infeasible: required <G|rho_g|G> = {coherence} exceeds 1")]
    Infeasible { coherence: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation leakage {leakage:e} exceeds bound {bound:e}")]
    Truncation { leakage: f64, bound: f64 },

    #[error("population {index} became negative ({value:e}); collision strength too large")]
    Negativity { index: usize, value: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("frequency protocol invalid: {0}")]
    Protocol(String),

    #[error("no profitable cycle: best power {best_power} at t_cycle = {t_cycle}")]
    NoProfitableCycle { best_power: f64, t_cycle: f64 },

    #[error("ordering check inconsistent: {0}")]
    InconsistentOrdering(String),
}

pub type Result<T> = std::result::Result<T, OttoError>;
