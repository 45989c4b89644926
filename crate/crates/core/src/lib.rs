//! Finite-time quantum Otto engine driven by streams of three-level atoms.
//!
//! The working medium is a single harmonic mode. Each heat bath is a stream
//! of atoms whose ground-space coherence sets both the temperature the mode
//! relaxes to and how fast it gets there. Work strokes use a
//! shortcut-to-adiabaticity ramp whose energy cost falls as `1/τ²`.
//!
//! Modules, from the bottom up:
//!
//! - [`bath`]: atom preparations, transition weights `E`, `G`, and matched
//!   bath pairs (incoherent, coherent hot, coherent cold, and the π family).
//! - [`dynamics`]: closed-form relaxation of the mean photon number.
//! - [`fock`]: truncated Fock-space propagation used as an oracle.
//! - [`sta`]: the quintic frequency ramp and its cost integral.
//! - [`cycle`]: steady-cycle fixed point, work, heat, efficiency and power.
//! - [`analysis`]: closed-form sensitivities and bath orderings.
//! - [`optimize`]: max-power search over cycle time, fractions and π.
//! - [`verify`]: the property suite with measured errors per check.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bath;
pub mod cycle;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod ode;
pub mod optimize;
pub mod precise;
pub mod quadrature;
pub mod sampling;
pub mod sta;
pub mod verify;

pub use analysis::{
    derivative_checks, derivative_report, efficiency_ordering, power_monotonicity, DerivativeCheck,
    DerivativeReport, OrderingVerdict, PowerCondition, PowerVerdict,
};
pub use bath::{
    make_pair, make_pair_from_nbar, make_pair_pi, AtomBath, BathPair, PairKind, PairLabel, ThermalAtomSpec,
};
pub use cycle::{
    delta_nbar, nbar_after_cycles, nbar_hot, run_cycle, run_cycle_with, steady_cycle_nbar, transient_trajectory,
    CostGeometry, CycleReport, HeatKernel, OttoConfig, Phase, StrokeSchedule, TrajectorySample,
};
pub use dynamics::{nbar_evolve, PhotonState};
pub use error::{OttoError, Result};
pub use fock::FockDensity;
pub use optimize::{
    max_power_pqr, max_power_tcycle, peak_power, pi_sweep, AscentOptions, Optimum, PiSweep, PiSweepSpec,
    PowerModel, PqrOptimum, TcycleSearch,
};
pub use sta::{sta_cost, FrequencyProtocol, StaCost, Stroke};
pub use verify::{run_suite, Property, Tolerances, VerifySpec};
