use std::sync::Arc;

use super::interface::InterfaceState;
use super::strip::{HarmonicMap, Side, StripField};
use crate::elliptic::{solve_laplace, Boundary, EllipticProblem};
use crate::error::{Error, Result};
use crate::spectral::PeriodicField;

/// `ℋ^± g`: harmonic in `Ω^±`, equal to `g` on `Γ_f` and zero on the wall.
pub fn harmonic_extension(g: &PeriodicField, f: &InterfaceState, side: Side, ny: usize) -> Result<StripField> {
    let map = HarmonicMap::new(f, side, ny)?;
    harmonic_extension_on(&map, &g.real_samples())
}

/// Harmonic extension of real interface samples on an existing map.
pub fn harmonic_extension_on(map: &Arc<HarmonicMap>, g: &[f64]) -> Result<StripField> {
    let nx = map.nx();
    if g.len() != nx {
        return Err(Error::Shape(format!("{} interface samples for {nx} columns", g.len())));
    }
    if g.iter().all(|&v| v == 0.0) {
        return Ok(StripField::zeros(map));
    }
    let problem = EllipticProblem::new(
        map,
        vec![0.0; map.grid.len()],
        Boundary::Dirichlet(g.to_vec()),
        Boundary::Dirichlet(vec![0.0; nx]),
    );
    solve_laplace(&problem)
}

/// `∂̄_j w = ∂_j w + ℋ(∂_j f) ∂_3 w` for the horizontal axis `j` (0-based).
pub fn tangential_derivative(w: &StripField, j: usize) -> Result<StripField> {
    let map = w.map();
    if j != 0 {
        return Err(Error::UnsupportedDimension(j + 1));
    }
    let ext = harmonic_extension_on(map, map.fx())?;
    Ok(&w.dx() + &ext.mul(&w.dz()))
}

/// `∂̄_t w = ∂_t w + ℋ(∂_t f) ∂_3 w`, with the Eulerian `∂_t w` supplied and
/// `∂_t f` taken from the attached interface state.
pub fn tangential_time_derivative(w: &StripField, wt: &StripField) -> Result<StripField> {
    let map = w.map();
    let ext = harmonic_extension_on(map, &map.interface.ft.real_samples())?;
    Ok(wt + &ext.mul(&w.dz()))
}
