use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Grid, PeriodicField};

/// Interface graph `x_3 = f(x̄)` inside the strip `-1 < x_3 < 1`, its time
/// derivative `ft = ∂_t f`, and the reference height `f_star` of the flat
/// strip it is mapped from.
#[derive(Clone, Debug)]
pub struct InterfaceState {
    pub f: PeriodicField,
    pub ft: PeriodicField,
    pub f_star: f64,
}

impl InterfaceState {
    pub fn new(f: PeriodicField, ft: PeriodicField, f_star: f64) -> Result<Self> {
        f.check_same_grid(&ft)?;
        f.validate()?;
        ft.validate()?;
        if !f.is_real(1e-12) || !ft.is_real(1e-12) {
            return Err(Error::InvalidField("interface height must be real".into()));
        }
        if !(f_star.abs() < 1.0) {
            return Err(Error::Domain(format!("reference height {f_star} outside (-1, 1)")));
        }
        let (lo, hi) = (f.min_re(), f.max_re());
        if !(lo > -1.0 && hi < 1.0) {
            return Err(Error::InterfaceExit { min: lo, max: hi });
        }
        Ok(InterfaceState { f: f.re(), ft: ft.re(), f_star })
    }

    pub fn flat(grid: &Grid, c: f64) -> Result<Self> {
        Self::new(PeriodicField::constant(grid, c), PeriodicField::zeros(grid), c)
    }

    /// Height `f_fn`, velocity `ft_fn`, reference height equal to the mean of `f`.
    pub fn from_fn(
        grid: &Grid,
        f_fn: impl Fn([f64; 2]) -> f64,
        ft_fn: impl Fn([f64; 2]) -> f64,
    ) -> Result<Self> {
        let f = PeriodicField::from_fn(grid, f_fn);
        let c = f.mean().re;
        Self::new(f, PeriodicField::from_fn(grid, ft_fn), c)
    }

    pub fn with_f_star(mut self, f_star: f64) -> Result<Self> {
        if !(f_star.abs() < 1.0) {
            return Err(Error::Domain(format!("reference height {f_star} outside (-1, 1)")));
        }
        self.f_star = f_star;
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        self.f.grid()
    }

    pub fn dim(&self) -> usize {
        self.grid().dim()
    }

    /// `∇f`, one field per horizontal axis.
    pub fn gradient(&self) -> Vec<PeriodicField> {
        (0..self.dim()).map(|a| self.f.derivative(a)).collect()
    }

    pub fn min_height(&self) -> f64 {
        self.f.min_re()
    }

    pub fn max_height(&self) -> f64 {
        self.f.max_re()
    }

    /// Distance of the interface to the nearer wall.
    pub fn clearance(&self) -> f64 {
        (self.min_height() + 1.0).min(1.0 - self.max_height())
    }
}

/// Scaled normal `N = (-∇f, 1)` and tangents `τ_i = e_i + ∂_i f e_3`, as
/// component lists of length `d + 1`.
#[derive(Clone, Debug)]
pub struct Frame {
    pub normal: Vec<PeriodicField>,
    pub tangents: Vec<Vec<PeriodicField>>,
}

impl Frame {
    /// Pointwise `N · τ_i`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.tangents
            .iter()
            .map(|t| {
                let mut acc = self.normal[0].pointwise(&t[0]);
                for c in 1..t.len() {
                    acc = &acc + &self.normal[c].pointwise(&t[c]);
                }
                acc.max_abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn frame(state: &InterfaceState) -> Frame {
    let grid = state.grid();
    let d = state.dim();
    let grad = state.gradient();
    let mut normal: Vec<PeriodicField> = grad.iter().map(|g| -g).collect();
    normal.push(PeriodicField::constant(grid, 1.0));
    let tangents = (0..d)
        .map(|i| {
            let mut t: Vec<PeriodicField> = (0..d)
                .map(|a| PeriodicField::constant(grid, if a == i { 1.0 } else { 0.0 }))
                .collect();
            t.push(grad[i].clone());
            t
        })
        .collect();
    Frame { normal, tangents }
}

/// Serializable description of an interface built from Fourier modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterfaceMode {
    pub amplitude: f64,
    pub wavenumber: i64,
    #[serde(default)]
    pub phase: f64,
}

/// `c + Σ a cos(k x_1 + phase)` sampled on `grid`.
pub fn modal_height(grid: &Grid, c: f64, modes: &[InterfaceMode]) -> PeriodicField {
    PeriodicField::from_fn(grid, |x| {
        c + modes
            .iter()
            .map(|m| m.amplitude * (m.wavenumber as f64 * x[0] + m.phase).cos())
            .sum::<f64>()
    })
}
