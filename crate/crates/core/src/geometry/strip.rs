use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::interface::InterfaceState;
use crate::cheb::Chebyshev;
use crate::error::{Error, Result};
use crate::spectral::{ifft_in_place, row_derivative, wavenumber, PeriodicField};

/// Minimum admissible Jacobian determinant of the harmonic coordinates.
pub const BIJECTIVITY_THRESHOLD: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    /// `+1` for the upper phase, `-1` for the lower one.
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    /// Height of the fixed wall `Γ^±`.
    pub fn wall(self) -> f64 {
        self.sign()
    }

    pub fn other(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Minus => "minus",
            Side::Plus => "plus",
        }
    }

    /// Layer thickness of the flat reference strip at height `c`.
    pub fn thickness(self, c: f64) -> f64 {
        match self {
            Side::Minus => c + 1.0,
            Side::Plus => 1.0 - c,
        }
    }
}

/// Reference strip `T × [-1, c]` (side −) or `T × [c, 1]` (side +): uniform in
/// `x`, Chebyshev–Lobatto in `y` with row `j = 0` on the interface and
/// `j = ny` on the wall. Values are stored row-major as `j * nx + i`.
#[derive(Clone, Debug)]
pub struct StripGrid {
    pub nx: usize,
    pub ny: usize,
    pub side: Side,
    /// Reference interface height.
    pub c: f64,
    pub cheb: Arc<Chebyshev>,
    y: Vec<f64>,
    dtdy: f64,
}

impl StripGrid {
    pub fn new(nx: usize, ny: usize, side: Side, c: f64) -> Result<Self> {
        if nx < 4 || !nx.is_power_of_two() {
            return Err(Error::Shape(format!("horizontal size {nx} is not a power of two >= 4")));
        }
        if ny < 4 {
            return Err(Error::Shape(format!("need at least 4 vertical intervals, got {ny}")));
        }
        if !(c.abs() < 1.0) {
            return Err(Error::Domain(format!("reference height {c} outside (-1, 1)")));
        }
        Ok(Self::with_cheb(nx, Arc::new(Chebyshev::new(ny)), side, c))
    }

    pub(crate) fn with_cheb(nx: usize, cheb: Arc<Chebyshev>, side: Side, c: f64) -> Self {
        let ny = cheb.intervals();
        let h = side.thickness(c);
        // t = 1 at the interface, t = -1 at the wall
        let y = cheb
            .nodes()
            .iter()
            .map(|t| match side {
                Side::Minus => -1.0 + h * (t + 1.0) / 2.0,
                Side::Plus => 1.0 - h * (t + 1.0) / 2.0,
            })
            .collect();
        let dtdy = match side {
            Side::Minus => 2.0 / h,
            Side::Plus => -2.0 / h,
        };
        StripGrid { nx, ny, side, c, cheb, y, dtdy }
    }

    pub fn len(&self) -> usize {
        self.nx * (self.ny + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rows(&self) -> usize {
        self.ny + 1
    }

    pub fn thickness(&self) -> f64 {
        self.side.thickness(self.c)
    }

    pub fn x(&self, i: usize) -> f64 {
        2.0 * PI * i as f64 / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y[j]
    }

    pub fn ys(&self) -> &[f64] {
        &self.y
    }

    /// `dt/dy` of the affine map to the Chebyshev variable.
    pub fn dtdy(&self) -> f64 {
        self.dtdy
    }

    /// Vertical derivative matrix entry `d/dy` between rows `j` and `l`.
    pub fn dy(&self, j: usize, l: usize) -> f64 {
        self.cheb.d(j, l) * self.dtdy
    }

    /// Reference-strip quadrature weights (trapezoid × Clenshaw–Curtis).
    pub fn weights(&self) -> Vec<f64> {
        let wx = 2.0 * PI / self.nx as f64;
        let half = self.thickness() / 2.0;
        let cc = self.cheb.weights();
        let mut w = vec![0.0; self.len()];
        for j in 0..=self.ny {
            for i in 0..self.nx {
                w[j * self.nx + i] = wx * cc[j] * half;
            }
        }
        w
    }

    /// Applies `d/dy` along every column.
    pub fn apply_dy(&self, v: &[f64]) -> Vec<f64> {
        let (nx, m) = (self.nx, self.ny + 1);
        let mut out = vec![0.0; v.len()];
        for j in 0..m {
            let row = &mut out[j * nx..(j + 1) * nx];
            for l in 0..m {
                let d = self.dy(j, l);
                if d == 0.0 {
                    continue;
                }
                let src = &v[l * nx..(l + 1) * nx];
                for (o, s) in row.iter_mut().zip(src) {
                    *o += d * s;
                }
            }
        }
        out
    }

    /// `d/dy` evaluated on a single row `j` only.
    pub fn apply_dy_row(&self, v: &[f64], j: usize) -> Vec<f64> {
        let nx = self.nx;
        let mut out = vec![0.0; nx];
        for l in 0..=self.ny {
            let d = self.dy(j, l);
            for (o, s) in out.iter_mut().zip(&v[l * nx..(l + 1) * nx]) {
                *o += d * s;
            }
        }
        out
    }
}

/// Harmonic coordinates `Φ(x, y) = (x, φ(x, y))` from the reference strip to
/// the curved phase domain: `φ` is harmonic in `(x, y)`, equals `f` on the
/// reference interface `y = c` and the identity on the wall. The closed-form
/// modal solution is used, so `φ` and its derivatives are exact per mode.
pub struct HarmonicMap {
    pub grid: StripGrid,
    pub interface: InterfaceState,
    pub phi: Vec<f64>,
    pub phi_x: Vec<f64>,
    pub phi_y: Vec<f64>,
    pub phi_xx: Vec<f64>,
    pub phi_xy: Vec<f64>,
    /// `φ_y Δ = c_xx ∂_xx + c_xy ∂_xy + c_yy ∂_yy + c_y ∂_y` in reference variables.
    pub(crate) c_xx: Vec<f64>,
    pub(crate) c_xy: Vec<f64>,
    pub(crate) c_yy: Vec<f64>,
    pub(crate) c_y: Vec<f64>,
    min_jacobian: f64,
}

impl fmt::Debug for HarmonicMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HarmonicMap")
            .field("side", &self.grid.side)
            .field("nx", &self.grid.nx)
            .field("ny", &self.grid.ny)
            .field("min_jacobian", &self.min_jacobian)
            .finish()
    }
}

/// `sinh(k z)/sinh(k h)` and `cosh(k z)/sinh(k h)` for `0 <= z <= h`, `k > 0`,
/// in overflow-free form.
fn sinh_ratio(k: f64, z: f64, h: f64) -> (f64, f64) {
    let e = (k * (z - h)).exp();
    let den = 1.0 - (-2.0 * k * h).exp();
    let q = (-2.0 * k * z).exp();
    (e * (1.0 - q) / den, e * (1.0 + q) / den)
}

impl HarmonicMap {
    pub fn new(state: &InterfaceState, side: Side, ny: usize) -> Result<Arc<Self>> {
        if state.dim() != 1 {
            return Err(Error::UnsupportedDimension(state.dim()));
        }
        let nx = state.grid().n(0);
        let grid = StripGrid::new(nx, ny, side, state.f_star)?;
        Self::on_grid(state, grid)
    }

    pub(crate) fn on_grid(state: &InterfaceState, grid: StripGrid) -> Result<Arc<Self>> {
        if state.dim() != 1 {
            return Err(Error::UnsupportedDimension(state.dim()));
        }
        let (nx, m) = (grid.nx, grid.rows());
        if state.grid().n(0) != nx {
            return Err(Error::Shape(format!(
                "interface has {} points, strip has {nx}",
                state.grid().n(0)
            )));
        }
        let c = grid.c;
        let h = grid.thickness();
        let ghat: Vec<Complex64> = state
            .f
            .coefficients()
            .iter()
            .enumerate()
            .map(|(i, &z)| if i == 0 { z - c } else { z })
            .collect();
        let len = grid.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut eta = vec![zero; len];
        let mut eta_x = vec![zero; len];
        let mut eta_y = vec![zero; len];
        let mut eta_xx = vec![zero; len];
        let mut eta_xy = vec![zero; len];
        let orient = match grid.side {
            Side::Minus => 1.0,
            Side::Plus => -1.0,
        };
        for j in 0..m {
            let y = grid.y(j);
            let z = match grid.side {
                Side::Minus => y + 1.0,
                Side::Plus => 1.0 - y,
            };
            for i in 0..nx {
                let k = wavenumber(i, nx);
                let ka = k.abs();
                let (s, sy) = if ka == 0.0 {
                    (z / h, orient / h)
                } else {
                    let (s, ch) = sinh_ratio(ka, z, h);
                    (s, orient * ka * ch)
                };
                let nyq = 2 * i == nx;
                let g = ghat[i];
                let idx = j * nx + i;
                let ik = if nyq { zero } else { Complex64::new(0.0, k) };
                eta[idx] = g * s;
                eta_y[idx] = g * sy;
                eta_x[idx] = g * s * ik;
                eta_xy[idx] = g * sy * ik;
                eta_xx[idx] = g * s * (-k * k);
            }
        }
        let back = |mut v: Vec<Complex64>| -> Vec<f64> {
            ifft_in_place(&mut v, nx);
            v.iter().map(|c| c.re).collect()
        };
        let mut phi = back(eta);
        for j in 0..m {
            for i in 0..nx {
                phi[j * nx + i] += grid.y(j);
            }
        }
        // the interface row reproduces f exactly
        for (i, v) in state.f.real_samples().into_iter().enumerate() {
            phi[i] = v;
        }
        for i in 0..nx {
            phi[(m - 1) * nx + i] = grid.side.wall();
        }
        let phi_x = back(eta_x);
        let mut phi_y = back(eta_y);
        for v in phi_y.iter_mut() {
            *v += 1.0;
        }
        let phi_xx = back(eta_xx);
        let phi_xy = back(eta_xy);

        let min_jacobian = phi_y.iter().cloned().fold(f64::INFINITY, f64::min);
        if !(min_jacobian >= BIJECTIVITY_THRESHOLD) {
            return Err(Error::BijectivityLoss { min_jacobian, threshold: BIJECTIVITY_THRESHOLD });
        }
        let mut c_xx = vec![0.0; len];
        let mut c_xy = vec![0.0; len];
        let mut c_yy = vec![0.0; len];
        let mut c_y = vec![0.0; len];
        for n in 0..len {
            let (px, py, pxx, pxy) = (phi_x[n], phi_y[n], phi_xx[n], phi_xy[n]);
            let pyy = -pxx;
            let a = (1.0 + px * px) / py;
            let a_y = (2.0 * px * pxy * py - (1.0 + px * px) * pyy) / (py * py);
            c_xx[n] = py;
            c_xy[n] = -2.0 * px;
            c_yy[n] = a;
            c_y[n] = a_y - pxx;
        }
        Ok(Arc::new(HarmonicMap {
            grid,
            interface: state.clone(),
            phi,
            phi_x,
            phi_y,
            phi_xx,
            phi_xy,
            c_xx,
            c_xy,
            c_yy,
            c_y,
            min_jacobian,
        }))
    }

    pub fn side(&self) -> Side {
        self.grid.side
    }

    pub fn nx(&self) -> usize {
        self.grid.nx
    }

    pub fn ny(&self) -> usize {
        self.grid.ny
    }

    /// `det DΦ = φ_y`.
    pub fn jacobian(&self) -> &[f64] {
        &self.phi_y
    }

    pub fn min_jacobian(&self) -> f64 {
        self.min_jacobian
    }

    /// Physical height of grid point `(i, j)`.
    pub fn z(&self, i: usize, j: usize) -> f64 {
        self.phi[j * self.grid.nx + i]
    }

    /// Physical-domain quadrature weights (reference weights × Jacobian).
    pub fn weights(&self) -> Vec<f64> {
        self.grid.weights().iter().zip(&self.phi_y).map(|(w, j)| w * j).collect()
    }

    /// Interface slope `∂_1 f`, sampled.
    pub fn fx(&self) -> &[f64] {
        &self.phi_x[..self.grid.nx]
    }

    /// Same map geometry for the opposite phase.
    pub fn mirror(&self) -> Result<Arc<Self>> {
        let g = StripGrid::with_cheb(self.grid.nx, self.grid.cheb.clone(), self.side().other(), self.grid.c);
        Self::on_grid(&self.interface, g)
    }
}

/// A real field on one phase domain, stored on the reference strip.
#[derive(Clone)]
pub struct StripField {
    map: Arc<HarmonicMap>,
    values: Vec<f64>,
}

impl fmt::Debug for StripField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StripField")
            .field("side", &self.map.side())
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

impl StripField {
    pub fn new(map: Arc<HarmonicMap>, values: Vec<f64>) -> Result<Self> {
        if values.len() != map.grid.len() {
            return Err(Error::Shape(format!(
                "{} values for a strip of {} points",
                values.len(),
                map.grid.len()
            )));
        }
        Ok(StripField { map, values })
    }

    pub fn zeros(map: &Arc<HarmonicMap>) -> Self {
        StripField { map: map.clone(), values: vec![0.0; map.grid.len()] }
    }

    pub fn constant(map: &Arc<HarmonicMap>, c: f64) -> Self {
        StripField { map: map.clone(), values: vec![c; map.grid.len()] }
    }

    /// Samples `u(x, z)` at the physical images of the grid points.
    pub fn from_fn(map: &Arc<HarmonicMap>, u: impl Fn(f64, f64) -> f64) -> Self {
        let g = &map.grid;
        let mut values = vec![0.0; g.len()];
        for j in 0..g.rows() {
            for i in 0..g.nx {
                values[j * g.nx + i] = u(g.x(i), map.z(i, j));
            }
        }
        StripField { map: map.clone(), values }
    }

    /// Constant-in-depth extension of a horizontal function.
    pub fn from_horizontal(map: &Arc<HarmonicMap>, g: &[f64]) -> Self {
        let mut values = Vec::with_capacity(map.grid.len());
        for _ in 0..map.grid.rows() {
            values.extend_from_slice(g);
        }
        StripField { map: map.clone(), values }
    }

    pub fn map(&self) -> &Arc<HarmonicMap> {
        &self.map
    }

    pub fn side(&self) -> Side {
        self.map.side()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        StripField { map: self.map.clone(), values }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.map.grid.nx + i]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.map.grid.nx;
        &self.values[j * nx..(j + 1) * nx]
    }

    /// Values on `Γ_f`.
    pub fn interface_trace(&self) -> Vec<f64> {
        self.row(0).to_vec()
    }

    /// Values on the fixed wall.
    pub fn wall_trace(&self) -> Vec<f64> {
        self.row(self.map.grid.ny).to_vec()
    }

    pub fn ref_dx(&self) -> Self {
        self.with_values(row_derivative(&self.values, self.map.grid.nx))
    }

    pub fn ref_dy(&self) -> Self {
        self.with_values(self.map.grid.apply_dy(&self.values))
    }

    /// Physical `∂_1 = ∂_x - (φ_x/φ_y) ∂_y`.
    pub fn dx(&self) -> Self {
        let vx = row_derivative(&self.values, self.map.grid.nx);
        let vy = self.map.grid.apply_dy(&self.values);
        let m = &self.map;
        let values = (0..vx.len()).map(|n| vx[n] - m.phi_x[n] / m.phi_y[n] * vy[n]).collect();
        self.with_values(values)
    }

    /// Physical `∂_3 = ∂_y / φ_y`.
    pub fn dz(&self) -> Self {
        let vy = self.map.grid.apply_dy(&self.values);
        let values = vy.iter().zip(&self.map.phi_y).map(|(a, b)| a / b).collect();
        self.with_values(values)
    }

    pub fn gradient(&self) -> [StripField; 2] {
        [self.dx(), self.dz()]
    }

    /// Physical Laplacian by composition of first derivatives.
    pub fn laplacian(&self) -> Self {
        &self.dx().dx() + &self.dz().dz()
    }

    /// `N · ∇u` restricted to `Γ_f`.
    pub fn conormal_trace(&self) -> Vec<f64> {
        let nx = self.map.grid.nx;
        let vx = row_derivative(&self.values[..nx], nx);
        let vy = self.map.grid.apply_dy_row(&self.values, 0);
        let fx = self.map.fx();
        (0..nx)
            .map(|i| -fx[i] * vx[i] + (1.0 + fx[i] * fx[i]) * vy[i] / self.map.phi_y[i])
            .collect()
    }

    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        self.with_values(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &StripField, f: impl Fn(f64, f64) -> f64) -> Self {
        assert!(Arc::ptr_eq(&self.map, &other.map) || self.values.len() == other.values.len());
        self.with_values(self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_values(|v| v * s)
    }

    pub fn mul(&self, other: &StripField) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    /// `∫_Ω u dx` over the physical phase domain.
    pub fn integrate(&self) -> f64 {
        self.map.weights().iter().zip(&self.values).map(|(w, v)| w * v).sum()
    }

    /// `(∫_Ω u^2)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        self.mul(self).integrate().max(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &StripField) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Horizontal periodic field from row `j`.
    pub fn row_field(&self, j: usize) -> PeriodicField {
        PeriodicField::from_real(self.map.interface.grid().clone(), self.row(j).to_vec())
            .expect("matching horizontal grid")
    }
}

impl std::ops::Add for &StripField {
    type Output = StripField;
    fn add(self, rhs: &StripField) -> StripField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &StripField {
    type Output = StripField;
    fn sub(self, rhs: &StripField) -> StripField {
        self.zip_with(rhs, |a, b| a - b)
    }
}
