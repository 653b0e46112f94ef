//! Numerical laboratory for interfaces between two fluid phases in a periodic
//! strip: spectral and paradifferential operators, harmonic coordinates,
//! elliptic and transmission solvers, Dirichlet–Neumann operators, two-phase
//! states with their discontinuity classification, and interface dynamics.

pub mod cheb;
pub mod dn;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod json;
pub mod spectral;
pub mod state;

pub use error::{Error, Result};
pub use geometry::{HarmonicMap, InterfaceMode, InterfaceState, Side, StripField};
pub use spectral::{Grid, PeriodicField};
pub use state::{Constants, TwoPhaseState};

/// Crate version, echoed in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
