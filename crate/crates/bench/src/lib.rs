//! Fixtures shared by the operator benchmarks.

use ewlab_core::{Grid, InterfaceState, PeriodicField, Result};

/// Smooth two-mode interface on `nx` points.
pub fn wavy_interface(nx: usize) -> Result<InterfaceState> {
    let g = Grid::line(nx)?;
    InterfaceState::from_fn(&g, |x| 0.1 * x[0].cos() + 0.03 * (3.0 * x[0]).sin(), |_| 0.0)
}

/// Field with an algebraically decaying spectrum up to `nx/3`.
pub fn rough_field(nx: usize) -> Result<PeriodicField> {
    let g = Grid::line(nx)?;
    let kmax = (nx / 3) as f64;
    Ok(PeriodicField::from_fn(&g, |x| {
        (1..=kmax as usize).map(|k| (k as f64 * x[0] + k as f64).cos() / (k * k) as f64).sum()
    }))
}
