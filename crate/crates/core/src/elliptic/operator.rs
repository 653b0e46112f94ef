use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::gmres::{gmres, preconditioned_residual, GmresOptions};
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, Side, StripField};
use crate::spectral::{fft_in_place, ifft_in_place, row_derivative, row_derivatives};

/// Residual bound every solve must meet.
pub const SOLVER_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcKind {
    Dirichlet,
    Neumann,
}

/// Boundary datum on one face. On `Γ_f` Neumann data prescribe `N · ∇u`
/// (scaled normal), on the wall `∂_3 u`.
#[derive(Clone, Debug)]
pub enum Boundary {
    Dirichlet(Vec<f64>),
    Neumann(Vec<f64>),
}

impl Boundary {
    pub fn kind(&self) -> BcKind {
        match self {
            Boundary::Dirichlet(_) => BcKind::Dirichlet,
            Boundary::Neumann(_) => BcKind::Neumann,
        }
    }

    pub fn data(&self) -> &[f64] {
        match self {
            Boundary::Dirichlet(v) | Boundary::Neumann(v) => v,
        }
    }
}

/// `Δu = source` on one phase domain with the given face data.
///
/// Neumann-only configurations need `interface_mean`, the value the mean of
/// `u` over `Γ_f` is shifted to, and must satisfy the flux compatibility
/// condition.
#[derive(Clone, Debug)]
pub struct EllipticProblem {
    pub map: Arc<HarmonicMap>,
    pub source: Vec<f64>,
    pub interface: Boundary,
    pub wall: Boundary,
    pub interface_mean: Option<f64>,
}

impl EllipticProblem {
    pub fn new(map: &Arc<HarmonicMap>, source: Vec<f64>, interface: Boundary, wall: Boundary) -> Self {
        EllipticProblem { map: map.clone(), source, interface, wall, interface_mean: None }
    }

    pub fn with_interface_mean(mut self, m: f64) -> Self {
        self.interface_mean = Some(m);
        self
    }

    /// `∫Δu - ∫_Γ (outward flux)`; zero for solvable Neumann problems.
    pub fn flux_defect(&self) -> f64 {
        let w = self.map.weights();
        let vol: f64 = w.iter().zip(&self.source).map(|(a, b)| a * b).sum();
        let dx = 2.0 * std::f64::consts::PI / self.map.nx() as f64;
        let gi: f64 = self.interface.data().iter().sum::<f64>() * dx;
        let gw: f64 = self.wall.data().iter().sum::<f64>() * dx;
        // outward normal: side − has +N on Γ_f and -e_3 on the wall
        match self.map.side() {
            Side::Minus => vol - gi + gw,
            Side::Plus => vol + gi - gw,
        }
    }
}

pub(crate) struct Derivs {
    pub vx: Vec<f64>,
    pub vxx: Vec<f64>,
    pub vy: Vec<f64>,
    pub vyy: Vec<f64>,
    pub vxy: Vec<f64>,
}

pub(crate) fn derivs(map: &HarmonicMap, v: &[f64]) -> Derivs {
    let nx = map.nx();
    let (vx, vxx) = row_derivatives(v, nx);
    let vy = map.grid.apply_dy(v);
    let vyy = map.grid.apply_dy(&vy);
    let vxy = row_derivative(&vy, nx);
    Derivs { vx, vxx, vy, vyy, vxy }
}

/// `φ_y Δv` at every point of the strip.
pub(crate) fn scaled_laplacian(map: &HarmonicMap, d: &Derivs) -> Vec<f64> {
    (0..d.vx.len())
        .map(|n| map.c_xx[n] * d.vxx[n] + map.c_xy[n] * d.vxy[n] + map.c_yy[n] * d.vyy[n] + map.c_y[n] * d.vy[n])
        .collect()
}

/// `N · ∇v` on `Γ_f` from reference derivatives.
pub(crate) fn conormal(map: &HarmonicMap, d: &Derivs) -> Vec<f64> {
    let fx = map.fx();
    (0..map.nx()).map(|i| -fx[i] * d.vx[i] + (1.0 + fx[i] * fx[i]) * d.vy[i] / map.phi_y[i]).collect()
}

/// `∂_3 v` on the wall.
pub(crate) fn wall_normal(map: &HarmonicMap, d: &Derivs) -> Vec<f64> {
    let nx = map.nx();
    let off = map.ny() * nx;
    (0..nx).map(|i| d.vy[off + i] / map.phi_y[off + i]).collect()
}

fn row_mean(map: &HarmonicMap, c: &[f64], j: usize) -> f64 {
    let nx = map.nx();
    c[j * nx..(j + 1) * nx].iter().sum::<f64>() / nx as f64
}

/// Block of the x-averaged operator for wavenumber `k` on one part, written
/// into `mat` at row/column offset `off`.
fn interior_block(map: &HarmonicMap, k: f64, mat: &mut DMatrix<f64>, off: usize) {
    let g = &map.grid;
    let m = g.rows();
    let d1 = DMatrix::from_fn(m, m, |j, l| g.dy(j, l));
    let d2 = &d1 * &d1;
    for j in 1..m - 1 {
        let (cxx, cyy, cy) = (row_mean(map, &map.c_xx, j), row_mean(map, &map.c_yy, j), row_mean(map, &map.c_y, j));
        for l in 0..m {
            mat[(off + j, off + l)] = cyy * d2[(j, l)] + cy * d1[(j, l)];
        }
        mat[(off + j, off + j)] -= k * k * cxx;
    }
}

fn conormal_block_row(map: &HarmonicMap) -> Vec<f64> {
    let nx = map.nx();
    let fx = map.fx();
    let c = (0..nx).map(|i| (1.0 + fx[i] * fx[i]) / map.phi_y[i]).sum::<f64>() / nx as f64;
    (0..map.grid.rows()).map(|l| c * map.grid.dy(0, l)).collect()
}

fn wall_block_row(map: &HarmonicMap) -> Vec<f64> {
    let nx = map.nx();
    let ny = map.ny();
    let c = (0..nx).map(|i| 1.0 / map.phi_y[ny * nx + i]).sum::<f64>() / nx as f64;
    (0..map.grid.rows()).map(|l| c * map.grid.dy(ny, l)).collect()
}

/// Mode-wise dense LU of the x-averaged operator; used as right preconditioner.
pub(crate) struct ModePreconditioner {
    nx: usize,
    block: usize,
    lus: Vec<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl ModePreconditioner {
    fn build(nx: usize, block: usize, make: impl Fn(usize, f64) -> DMatrix<f64>) -> Result<Self> {
        let mut lus = Vec::with_capacity(nx / 2 + 1);
        for ki in 0..=nx / 2 {
            let mat = make(ki, ki as f64);
            let lu = mat.lu();
            if !lu.is_invertible() {
                return Err(Error::Gauge(format!("singular mode block for k = {ki}")));
            }
            lus.push(lu);
        }
        Ok(ModePreconditioner { nx, block, lus })
    }

    fn apply(&self, r: &[f64]) -> Vec<f64> {
        let nx = self.nx;
        let mut hat: Vec<Complex64> = r.iter().map(|&a| Complex64::new(a, 0.0)).collect();
        fft_in_place(&mut hat, nx);
        let mut re = DVector::zeros(self.block);
        let mut im = DVector::zeros(self.block);
        for i in 0..nx {
            let ki = if i <= nx / 2 { i } else { nx - i };
            for b in 0..self.block {
                let c = hat[b * nx + i];
                re[b] = c.re;
                im[b] = c.im;
            }
            let lu = &self.lus[ki];
            let sr = lu.solve(&re).expect("invertible block");
            let si = lu.solve(&im).expect("invertible block");
            for b in 0..self.block {
                hat[b * nx + i] = Complex64::new(sr[b], si[b]);
            }
        }
        ifft_in_place(&mut hat, nx);
        let s = 1.0 / nx as f64;
        hat.iter().map(|c| c.re * s).collect()
    }
}

/// Replaces the mean of the wall rows by the mean of the wall values
/// (equivalent to dropping one dependent equation and fixing the constant).
fn pin_wall_rows(out: &mut [f64], v: &[f64], nx: usize, wall_off: usize) {
    let rmean = out[wall_off..wall_off + nx].iter().sum::<f64>() / nx as f64;
    let vmean = v[wall_off..wall_off + nx].iter().sum::<f64>() / nx as f64;
    for o in &mut out[wall_off..wall_off + nx] {
        *o += vmean - rmean;
    }
}

fn pin_wall_rhs(b: &mut [f64], nx: usize, wall_off: usize) {
    let mean = b[wall_off..wall_off + nx].iter().sum::<f64>() / nx as f64;
    for o in &mut b[wall_off..wall_off + nx] {
        *o -= mean;
    }
}

/// Reusable single-phase solver for one boundary configuration.
pub struct LaplaceSolver {
    map: Arc<HarmonicMap>,
    iface: BcKind,
    wall: BcKind,
    pre: ModePreconditioner,
}

impl LaplaceSolver {
    pub fn new(map: &Arc<HarmonicMap>, iface: BcKind, wall: BcKind) -> Result<Self> {
        let m = map.grid.rows();
        let pinned = iface == BcKind::Neumann && wall == BcKind::Neumann;
        let pre = ModePreconditioner::build(map.nx(), m, |ki, k| {
            let mut mat = DMatrix::zeros(m, m);
            interior_block(map, k, &mut mat, 0);
            match iface {
                BcKind::Dirichlet => mat[(0, 0)] = 1.0,
                BcKind::Neumann => {
                    for (l, v) in conormal_block_row(map).into_iter().enumerate() {
                        mat[(0, l)] = v;
                    }
                }
            }
            if wall == BcKind::Dirichlet || (pinned && ki == 0) {
                mat[(m - 1, m - 1)] = 1.0;
            } else {
                for (l, v) in wall_block_row(map).into_iter().enumerate() {
                    mat[(m - 1, l)] = v;
                }
            }
            mat
        })?;
        Ok(LaplaceSolver { map: map.clone(), iface, wall, pre })
    }

    pub fn map(&self) -> &Arc<HarmonicMap> {
        &self.map
    }

    fn pinned(&self) -> bool {
        self.iface == BcKind::Neumann && self.wall == BcKind::Neumann
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let map = &*self.map;
        let nx = map.nx();
        let ny = map.ny();
        let d = derivs(map, v);
        let mut out = scaled_laplacian(map, &d);
        match self.iface {
            BcKind::Dirichlet => out[..nx].copy_from_slice(&v[..nx]),
            BcKind::Neumann => out[..nx].copy_from_slice(&conormal(map, &d)),
        }
        let w = ny * nx;
        match self.wall {
            BcKind::Dirichlet => out[w..].copy_from_slice(&v[w..]),
            BcKind::Neumann => out[w..].copy_from_slice(&wall_normal(map, &d)),
        }
        if self.pinned() {
            pin_wall_rows(&mut out, v, nx, w);
        }
        out
    }

    /// Solves `Δu = source` with interface and wall data of the configured kinds.
    pub fn solve(&self, source: &[f64], iface: &[f64], wall: &[f64]) -> Result<Vec<f64>> {
        let map = &*self.map;
        let nx = map.nx();
        let w = map.ny() * nx;
        if source.len() != map.grid.len() || iface.len() != nx || wall.len() != nx {
            return Err(Error::Shape("elliptic data do not match the strip grid".into()));
        }
        let mut b: Vec<f64> = source.iter().zip(&map.phi_y).map(|(s, j)| s * j).collect();
        b[..nx].copy_from_slice(iface);
        b[w..].copy_from_slice(wall);
        if self.pinned() {
            pin_wall_rhs(&mut b, nx, w);
        }
        let apply = |v: &[f64]| self.apply(v);
        let pre = |r: &[f64]| self.pre.apply(r);
        let (x, iters) = gmres(&apply, &pre, &b, &GmresOptions::default())?;
        let res = preconditioned_residual(&apply, &pre, &x, &b);
        if !(res <= SOLVER_TOLERANCE) {
            return Err(Error::NoConvergence { residual: res, iterations: iters });
        }
        Ok(x)
    }
}

/// Solves an [`EllipticProblem`].
pub fn solve_laplace(problem: &EllipticProblem) -> Result<StripField> {
    let map = &problem.map;
    let (ik, wk) = (problem.interface.kind(), problem.wall.kind());
    let all_neumann = ik == BcKind::Neumann && wk == BcKind::Neumann;
    if all_neumann {
        let Some(mean) = problem.interface_mean else {
            return Err(Error::Gauge("all-Neumann problem needs an interface mean".into()));
        };
        let defect = problem.flux_defect();
        let scale = 1.0
            + problem.source.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            + problem.interface.data().iter().fold(0.0f64, |m, v| m.max(v.abs()))
            + problem.wall.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if defect.abs() > 1e-8 * scale {
            return Err(Error::IncompatibleData(format!("flux compatibility defect {defect:.3e}")));
        }
        let solver = LaplaceSolver::new(map, ik, wk)?;
        let mut v = solver.solve(&problem.source, problem.interface.data(), problem.wall.data())?;
        let nx = map.nx();
        let shift = mean - v[..nx].iter().sum::<f64>() / nx as f64;
        for a in v.iter_mut() {
            *a += shift;
        }
        return StripField::new(map.clone(), v);
    }
    let solver = LaplaceSolver::new(map, ik, wk)?;
    let v = solver.solve(&problem.source, problem.interface.data(), problem.wall.data())?;
    StripField::new(map.clone(), v)
}

/// Two-phase transmission problem `Δw^± = s^±` with
/// `a⁻ w⁻ - a⁺ w⁺ = J` and `b⁻ N·∇w⁻ - b⁺ N·∇w⁺ = K` on `Γ_f`.
pub struct TransmissionSolver {
    maps: [Arc<HarmonicMap>; 2],
    walls: [BcKind; 2],
    a: [f64; 2],
    b: [f64; 2],
    pre: ModePreconditioner,
}

/// Wall datum pair for a transmission solve (`[minus, plus]`).
pub struct TransmissionData<'a> {
    pub source: [&'a [f64]; 2],
    pub jump_value: &'a [f64],
    pub jump_flux: &'a [f64],
    pub wall: [&'a [f64]; 2],
}

impl TransmissionSolver {
    pub fn new(
        minus: &Arc<HarmonicMap>,
        plus: &Arc<HarmonicMap>,
        walls: [BcKind; 2],
        a: [f64; 2],
        b: [f64; 2],
    ) -> Result<Self> {
        if minus.side() != Side::Minus || plus.side() != Side::Plus || minus.nx() != plus.nx() || minus.ny() != plus.ny() {
            return Err(Error::Shape("transmission solve needs matching minus/plus strips".into()));
        }
        let m = minus.grid.rows();
        let pinned = walls == [BcKind::Neumann, BcKind::Neumann];
        let pre = ModePreconditioner::build(minus.nx(), 2 * m, |ki, k| {
            let mut mat = DMatrix::zeros(2 * m, 2 * m);
            interior_block(minus, k, &mut mat, 0);
            interior_block(plus, k, &mut mat, m);
            mat[(0, 0)] = a[0];
            mat[(0, m)] = -a[1];
            let (cm, cp) = (conormal_block_row(minus), conormal_block_row(plus));
            for l in 0..m {
                mat[(m, l)] = b[0] * cm[l];
                mat[(m, m + l)] = -b[1] * cp[l];
            }
            for (p, map) in [(0usize, minus), (1, plus)] {
                let row = p * m + m - 1;
                if walls[p] == BcKind::Dirichlet || (pinned && p == 0 && ki == 0) {
                    mat[(row, row)] = 1.0;
                } else {
                    for (l, v) in wall_block_row(map).into_iter().enumerate() {
                        mat[(row, p * m + l)] = v;
                    }
                }
            }
            mat
        })?;
        Ok(TransmissionSolver { maps: [minus.clone(), plus.clone()], walls, a, b, pre })
    }

    pub fn maps(&self) -> &[Arc<HarmonicMap>; 2] {
        &self.maps
    }

    fn pinned(&self) -> bool {
        self.walls == [BcKind::Neumann, BcKind::Neumann]
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let len = self.maps[0].grid.len();
        let nx = self.maps[0].nx();
        let w = self.maps[0].ny() * nx;
        let (vm, vp) = v.split_at(len);
        let dm = derivs(&self.maps[0], vm);
        let dp = derivs(&self.maps[1], vp);
        let mut out = scaled_laplacian(&self.maps[0], &dm);
        out.extend(scaled_laplacian(&self.maps[1], &dp));
        let (nm, np) = (conormal(&self.maps[0], &dm), conormal(&self.maps[1], &dp));
        for i in 0..nx {
            out[i] = self.a[0] * vm[i] - self.a[1] * vp[i];
            out[len + i] = self.b[0] * nm[i] - self.b[1] * np[i];
        }
        for (p, (vv, dd)) in [(vm, &dm), (vp, &dp)].into_iter().enumerate() {
            let off = p * len + w;
            match self.walls[p] {
                BcKind::Dirichlet => out[off..off + nx].copy_from_slice(&vv[w..]),
                BcKind::Neumann => out[off..off + nx].copy_from_slice(&wall_normal(&self.maps[p], dd)),
            }
        }
        if self.pinned() {
            pin_wall_rows(&mut out, v, nx, w);
        }
        out
    }

    /// Returns `[w⁻, w⁺]`. With Neumann data on both walls the solution is
    /// fixed only up to `(a⁺, a⁻) t`; the returned one has zero mean of `w⁻`
    /// on the wall.
    pub fn solve(&self, data: &TransmissionData<'_>) -> Result<[StripField; 2]> {
        let len = self.maps[0].grid.len();
        let nx = self.maps[0].nx();
        let w = self.maps[0].ny() * nx;
        let mut b = Vec::with_capacity(2 * len);
        for p in 0..2 {
            if data.source[p].len() != len || data.wall[p].len() != nx {
                return Err(Error::Shape("transmission data do not match the strip grid".into()));
            }
            b.extend(data.source[p].iter().zip(&self.maps[p].phi_y).map(|(s, j)| s * j));
        }
        if data.jump_value.len() != nx || data.jump_flux.len() != nx {
            return Err(Error::Shape("transmission jumps do not match the strip grid".into()));
        }
        b[..nx].copy_from_slice(data.jump_value);
        b[len..len + nx].copy_from_slice(data.jump_flux);
        b[w..w + nx].copy_from_slice(data.wall[0]);
        b[len + w..len + w + nx].copy_from_slice(data.wall[1]);
        if self.pinned() {
            pin_wall_rhs(&mut b, nx, w);
        }
        let apply = |v: &[f64]| self.apply(v);
        let pre = |r: &[f64]| self.pre.apply(r);
        let (x, iters) = gmres(&apply, &pre, &b, &GmresOptions::default())?;
        let res = preconditioned_residual(&apply, &pre, &x, &b);
        if !(res <= SOLVER_TOLERANCE) {
            return Err(Error::NoConvergence { residual: res, iterations: iters });
        }
        let (xm, xp) = x.split_at(len);
        Ok([
            StripField::new(self.maps[0].clone(), xm.to_vec())?,
            StripField::new(self.maps[1].clone(), xp.to_vec())?,
        ])
    }
}
