//! Two-phase states, the equation of state, jump/compatibility validation on
//! `Γ_f`, the Taylor sign and the energy norms used as runtime monitors.
//!
//! Sides are always ordered `[minus, plus]`; `⟦q⟧ = q⁺ - q⁻` and `N = (-∂_1 f, 1)`.

mod classify;
mod construct;
mod energy;
mod eos;
mod snapshot;
mod types;

pub use classify::{
    check_compatibility, classify_discontinuity, taylor_sign, tangential_pressure_check, CompatLevel,
    CompatibilityReport, Discontinuity, TangentialReport, TaylorReport, Tolerances, TraceReport,
};
pub use construct::{entropy_wave_state, hydrostatic_state, EntropyWaveSpec};
pub use energy::{domain_sobolev_norm, energy_norm, EnergyEntry, EnergyReport, DEFAULT_KAPPA};
pub use eos::{eos_density, eos_entropy, eos_pressure};
pub use snapshot::{read_snapshot, write_snapshot, Snapshot, SnapshotField, SnapshotManifest};
pub use types::{
    material_derivatives, CompressibleState, Constants, IncompressibleState, MaterialDerivatives, TwoPhaseState,
};
