//! Dirichlet–Neumann operators `𝒢^± g = ∓ N · ∇ℋ^± g |_{Γ_f}` with Dirichlet
//! data on the fixed walls, their flat-interface symbols, and the
//! paralinearization `𝒢 = T_λ + R`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::elliptic::{BcKind, LaplaceSolver};
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, InterfaceState, Side, StripField};
use crate::spectral::{paradiff_apply, Grid, PeriodicField, Symbol};

/// `|k| coth(|k| h)` with `h` the thickness of side `side` of the flat strip
/// at height `c`; `1/h` at `k = 0`.
pub fn dn_flat_symbol(k: f64, c: f64, side: Side) -> Result<f64> {
    if !(c.abs() < 1.0) {
        return Err(Error::Domain(format!("interface height {c} outside (-1, 1)")));
    }
    let h = side.thickness(c);
    let k = k.abs();
    if k == 0.0 {
        return Ok(1.0 / h);
    }
    Ok(k / (k * h).tanh())
}

/// Flat symbol of the variant with Neumann walls: `|k| tanh(|k| h)`.
pub fn dn_flat_symbol_neumann(k: f64, c: f64, side: Side) -> Result<f64> {
    if !(c.abs() < 1.0) {
        return Err(Error::Domain(format!("interface height {c} outside (-1, 1)")));
    }
    let k = k.abs();
    Ok(k * (k * side.thickness(c)).tanh())
}

/// DN operator for a fixed interface; the harmonic map and the
/// preconditioner factorization are built once and reused.
pub struct DnOperator {
    side: Side,
    map: Arc<HarmonicMap>,
    solver: LaplaceSolver,
    wall: BcKind,
}

impl DnOperator {
    /// Dirichlet walls, as in the definition above.
    pub fn new(f: &InterfaceState, side: Side, ny: usize) -> Result<Self> {
        Self::with_wall(f, side, ny, BcKind::Dirichlet)
    }

    /// Variant with `∂_3 ℋ g = 0` on the wall (the classical finite-depth DN
    /// operator, used by the reference integrator).
    pub fn with_wall(f: &InterfaceState, side: Side, ny: usize, wall: BcKind) -> Result<Self> {
        let map = HarmonicMap::new(f, side, ny)?;
        Self::on_map(&map, wall)
    }

    pub fn on_map(map: &Arc<HarmonicMap>, wall: BcKind) -> Result<Self> {
        let solver = LaplaceSolver::new(map, BcKind::Dirichlet, wall)?;
        Ok(DnOperator { side: map.side(), map: map.clone(), solver, wall })
    }

    pub fn map(&self) -> &Arc<HarmonicMap> {
        &self.map
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Harmonic extension of real interface data using the cached solver.
    pub fn extend(&self, g: &[f64]) -> Result<StripField> {
        let nx = self.map.nx();
        if g.len() != nx {
            return Err(Error::Shape(format!("{} samples for {nx} columns", g.len())));
        }
        let v = self.solver.solve(&vec![0.0; self.map.grid.len()], g, &vec![0.0; nx])?;
        StripField::new(self.map.clone(), v)
    }

    pub fn apply_real(&self, g: &[f64]) -> Result<Vec<f64>> {
        let ext = self.extend(g)?;
        let sign = -self.side.sign();
        Ok(ext.conormal_trace().into_iter().map(|v| sign * v).collect())
    }

    pub fn apply(&self, g: &PeriodicField) -> Result<PeriodicField> {
        g.validate()?;
        let re = self.apply_real(&g.real_samples())?;
        let vals: Vec<Complex64> = if g.is_real(0.0) {
            re.into_iter().map(|v| Complex64::new(v, 0.0)).collect()
        } else {
            let im = self.apply_real(&g.im().real_samples())?;
            re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect()
        };
        PeriodicField::from_samples(g.grid().clone(), vals)
    }

    pub fn wall_kind(&self) -> BcKind {
        self.wall
    }

    /// `R g = 𝒢 g - T_λ g`.
    pub fn remainder(&self, g: &PeriodicField) -> Result<PeriodicField> {
        let lam = LambdaSymbol::new(&self.map.interface);
        let glam = paradiff_apply(&lam, g)?;
        Ok(&self.apply(g)? - &glam)
    }
}

/// `𝒢^± g` for a single evaluation.
pub fn dn_apply(g: &PeriodicField, f: &InterfaceState, side: Side, ny: usize) -> Result<PeriodicField> {
    DnOperator::new(f, side, ny)?.apply(g)
}

/// `R^± g = 𝒢^± g - T_λ g`.
pub fn paralinearization_remainder(g: &PeriodicField, f: &InterfaceState, side: Side, ny: usize) -> Result<PeriodicField> {
    DnOperator::new(f, side, ny)?.remainder(g)
}

/// Principal symbol `λ(x̄, ξ) = sqrt((1+|∇f|²)|ξ|² - (∇f·ξ)²)`.
#[derive(Clone, Debug)]
pub struct LambdaSymbol {
    grad: Vec<PeriodicField>,
    exponent: f64,
}

impl LambdaSymbol {
    pub fn new(f: &InterfaceState) -> Self {
        LambdaSymbol { grad: f.gradient(), exponent: 1.0 }
    }

    /// `λ^s`, e.g. `s = 1/2` for `T_{√λ}`.
    pub fn power(f: &InterfaceState, s: f64) -> Self {
        LambdaSymbol { grad: f.gradient(), exponent: s }
    }

    fn value(&self, g: [f64; 2], xi: [f64; 2]) -> f64 {
        let g2 = g[0] * g[0] + g[1] * g[1];
        let x2 = xi[0] * xi[0] + xi[1] * xi[1];
        let gx = g[0] * xi[0] + g[1] * xi[1];
        let l = ((1.0 + g2) * x2 - gx * gx).max(0.0).sqrt();
        if self.exponent == 1.0 {
            l
        } else {
            l.powf(self.exponent)
        }
    }
}

impl Symbol for LambdaSymbol {
    fn order(&self) -> f64 {
        self.exponent
    }

    fn eval(&self, x: [f64; 2], xi: [f64; 2]) -> f64 {
        let mut g = [0.0; 2];
        for (a, d) in self.grad.iter().enumerate() {
            g[a] = d.evaluate(x).re;
        }
        self.value(g, xi)
    }

    fn is_homogeneous(&self) -> bool {
        true
    }

    fn sample(&self, grid: &Grid, xi: [f64; 2]) -> Result<PeriodicField> {
        if grid != self.grad[0].grid() {
            return Err(Error::Shape("symbol sampled on a foreign grid".into()));
        }
        let vals: Vec<f64> = (0..grid.len())
            .map(|n| {
                let mut g = [0.0; 2];
                for (a, d) in self.grad.iter().enumerate() {
                    g[a] = d.samples()[n].re;
                }
                self.value(g, xi)
            })
            .collect();
        PeriodicField::from_real(grid.clone(), vals)
    }
}
