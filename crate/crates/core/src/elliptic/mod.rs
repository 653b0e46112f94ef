//! Variable-coefficient Laplace solves on the curved phase domains, pulled
//! back to the reference strips, plus the div-curl and pressure systems.
//!
//! Collocation: Fourier in `x`, Chebyshev–Lobatto in `y`, equations written in
//! divergence-compatible form `φ_y Δ`. Systems are solved by restarted GMRES
//! preconditioned with the mode-wise LU of the x-averaged operator.

mod compressible;
mod divcurl;
mod gmres;
mod operator;
mod pressure;

pub use compressible::{compressible_pressure_consistency, CompressiblePhase, ConsistencyReport};
pub use divcurl::{divcurl_compatibility_defect, divcurl_solve, velocity_recovery_tangential, DivCurlData, Velocity};
pub use pressure::{pressure_incompressible, pressure_residual};

pub use operator::{
    solve_laplace, BcKind, Boundary, EllipticProblem, LaplaceSolver, TransmissionData, TransmissionSolver,
    SOLVER_TOLERANCE,
};

