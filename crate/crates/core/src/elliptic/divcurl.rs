use std::sync::Arc;

use super::operator::{solve_laplace, Boundary, EllipticProblem};
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, Side, StripField};

/// Planar velocity `(u_1, u_3)` on one phase domain.
#[derive(Clone, Debug)]
pub struct Velocity {
    pub u1: StripField,
    pub u3: StripField,
}

impl Velocity {
    pub fn zeros(map: &Arc<HarmonicMap>) -> Self {
        Velocity { u1: StripField::zeros(map), u3: StripField::zeros(map) }
    }

    pub fn map(&self) -> &Arc<HarmonicMap> {
        self.u1.map()
    }

    /// `∂_1 u_3 - ∂_3 u_1`.
    pub fn curl(&self) -> StripField {
        &self.u3.dx() - &self.u1.dz()
    }

    pub fn divergence(&self) -> StripField {
        &self.u1.dx() + &self.u3.dz()
    }

    /// `u · N` on `Γ_f`.
    pub fn normal_trace(&self) -> Vec<f64> {
        let fx = self.map().fx();
        let a = self.u1.interface_trace();
        let b = self.u3.interface_trace();
        (0..fx.len()).map(|i| b[i] - fx[i] * a[i]).collect()
    }

    /// `tr(∇u)^2 = Σ ∂_i u_j ∂_j u_i`.
    pub fn trace_grad_squared(&self) -> StripField {
        let (a, b) = (self.u1.dx(), self.u1.dz());
        let (c, d) = (self.u3.dx(), self.u3.dz());
        let v = (0..a.values().len())
            .map(|n| {
                let (a, b, c, d) = (a.values()[n], b.values()[n], c.values()[n], d.values()[n]);
                a * a + 2.0 * b * c + d * d
            })
            .collect();
        self.u1.with_values(v)
    }

    pub fn max_speed(&self) -> f64 {
        self.u1
            .values()
            .iter()
            .zip(self.u3.values())
            .fold(0.0, |m, (a, b)| m.max((a * a + b * b).sqrt()))
    }

    /// Mean of `u_1` over the wall.
    pub fn wall_mean(&self) -> f64 {
        let w = self.u1.wall_trace();
        w.iter().sum::<f64>() / w.len() as f64
    }
}

/// Data of the planar div-curl system on one phase.
pub struct DivCurlData<'a> {
    pub omega: &'a StripField,
    pub sigma: &'a StripField,
    /// `u · N` on `Γ_f`.
    pub theta: &'a [f64],
    /// Horizontal mean of `u_1` on the wall.
    pub alpha: f64,
}

/// `∫_Ω σ  ∓ ∫_Γ θ` (outward flux through `Γ_f` is `±N`).
pub fn divcurl_compatibility_defect(map: &HarmonicMap, sigma: &StripField, theta: &[f64]) -> f64 {
    let dx = 2.0 * std::f64::consts::PI / map.nx() as f64;
    let flux: f64 = theta.iter().sum::<f64>() * dx;
    match map.side() {
        Side::Minus => sigma.integrate() - flux,
        Side::Plus => sigma.integrate() + flux,
    }
}

/// Planar div-curl solve `∇×u = ω`, `∇·u = σ`, `u·N = θ` on `Γ_f`,
/// `u_3 = 0` on the wall, mean of `u_1` on the wall `= α`, through
/// `u = ∇^⊥ψ + ∇φ` with `∇^⊥ψ = (∂_3ψ, -∂_1ψ)`.
pub fn divcurl_solve(data: &DivCurlData<'_>) -> Result<Velocity> {
    let map = data.omega.map().clone();
    let nx = map.nx();
    let len = map.grid.len();
    if data.theta.len() != nx || data.sigma.values().len() != len {
        return Err(Error::Shape("div-curl data do not match the strip grid".into()));
    }
    let defect = divcurl_compatibility_defect(&map, data.sigma, data.theta);
    let scale = 1.0 + data.sigma.max_abs() + data.theta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if defect.abs() > 1e-8 * scale {
        return Err(Error::IncompatibleData(format!("∫σ and the interface flux differ by {defect:.3e}")));
    }
    let zeros = vec![0.0; nx];
    let psi0 = if data.omega.max_abs() == 0.0 {
        StripField::zeros(&map)
    } else {
        solve_laplace(&EllipticProblem::new(
            &map,
            data.omega.values().iter().map(|w| -w).collect(),
            Boundary::Dirichlet(zeros.clone()),
            Boundary::Dirichlet(zeros.clone()),
        ))?
    };
    let psih = solve_laplace(&EllipticProblem::new(
        &map,
        vec![0.0; len],
        Boundary::Dirichlet(zeros.clone()),
        Boundary::Dirichlet(vec![1.0; nx]),
    ))?;
    let phi = if data.sigma.max_abs() == 0.0 && data.theta.iter().all(|&v| v == 0.0) {
        StripField::zeros(&map)
    } else {
        solve_laplace(
            &EllipticProblem::new(
                &map,
                data.sigma.values().to_vec(),
                Boundary::Neumann(data.theta.to_vec()),
                Boundary::Neumann(zeros),
            )
            .with_interface_mean(0.0),
        )?
    };
    let wall_mean = |v: &StripField| {
        let w = v.wall_trace();
        w.iter().sum::<f64>() / nx as f64
    };
    let (psi0_z, psih_z, phi_x) = (psi0.dz(), psih.dz(), phi.dx());
    let base = wall_mean(&psi0_z) + wall_mean(&phi_x);
    let per_unit = wall_mean(&psih_z);
    if per_unit.abs() < 1e-14 {
        return Err(Error::Gauge("harmonic stream function carries no mean flow".into()));
    }
    let c = (data.alpha - base) / per_unit;
    let psi = &psi0 + &psih.scale(c);
    let u1 = &psi.dz() + &phi_x;
    let u3 = &phi.dz() - &psi.dx();
    Ok(Velocity { u1, u3 })
}

/// Div-curl recovery with the kinematic interface condition `u·N = ∂_t f`
/// taken from the interface state attached to the map. Also returns the
/// maximal kinematic defect `|u·N - ∂_t f|` on `Γ_f`.
pub fn velocity_recovery_tangential(
    omega: &StripField,
    divu: &StripField,
    u_mean: f64,
) -> Result<(Velocity, f64)> {
    let map = omega.map().clone();
    let ft = map.interface.ft.real_samples();
    let u = divcurl_solve(&DivCurlData { omega, sigma: divu, theta: &ft, alpha: u_mean })?;
    let kin = u.normal_trace().iter().zip(&ft).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok((u, kin))
}
