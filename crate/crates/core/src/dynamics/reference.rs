use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::elliptic::{BcKind, LaplaceSolver, TransmissionData, TransmissionSolver, Velocity};
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, InterfaceState, Side, StripField};
use crate::spectral::PeriodicField;
use crate::state::IncompressibleState;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// `[ρ⁻, ρ⁺]`.
    pub rho: [f64; 2],
    pub g: f64,
    /// Chebyshev intervals per layer.
    pub ny: usize,
    pub cfl: f64,
    /// 2/3-rule truncation of the right-hand side.
    pub dealias: bool,
}

impl SimParams {
    pub fn new(rho: [f64; 2], g: f64, ny: usize) -> Self {
        SimParams { rho, g, ny, cfl: 0.5, dealias: true }
    }
}

/// Interface height `f` and the density-weighted potential jump
/// `μ = ρ⁻Φ⁻ - ρ⁺Φ⁺` on `Γ_f`, the two evolved variables.
#[derive(Clone, Debug)]
pub struct SimState {
    pub f: PeriodicField,
    pub mu: PeriodicField,
    pub f_star: f64,
    pub time: f64,
    pub step: u64,
}

impl SimState {
    pub fn new(f: PeriodicField, mu: PeriodicField) -> Result<Self> {
        f.check_same_grid(&mu)?;
        if f.grid().dim() != 1 {
            return Err(Error::UnsupportedDimension(f.grid().dim()));
        }
        if !f.is_real(1e-12) || !mu.is_real(1e-12) {
            return Err(Error::InvalidField("simulation fields must be real".into()));
        }
        let f_star = f.mean().re;
        Ok(SimState { f: f.re(), mu: mu.re(), f_star, time: 0.0, step: 0 })
    }

    pub fn at_rest(f: PeriodicField) -> Result<Self> {
        let mu = PeriodicField::zeros(f.grid());
        Self::new(f, mu)
    }

    pub fn nx(&self) -> usize {
        self.f.grid().n(0)
    }
}

/// Velocity field and interface rates of a [`SimState`].
#[derive(Clone, Debug)]
pub struct Flow {
    /// Interface carrying `∂_t f`.
    pub interface: InterfaceState,
    pub potential: [StripField; 2],
    pub velocity: [Velocity; 2],
    pub ft: Vec<f64>,
    pub mu_t: Vec<f64>,
    /// `max |N·∇Φ⁻ - N·∇Φ⁺|`.
    pub flux_mismatch: f64,
}

impl Flow {
    pub fn max_speed(&self) -> f64 {
        self.velocity[0].max_speed().max(self.velocity[1].max_speed())
    }
}

/// Reference integrator: each layer carries a potential flow with rigid
/// walls, coupled through continuity of the normal velocity and pressure on
/// `Γ_f`; RK4 in `(f, μ)`.
pub struct ReferenceIntegrator {
    pub params: SimParams,
}

impl ReferenceIntegrator {
    pub fn new(params: SimParams) -> Result<Self> {
        if !(params.rho[0] > 0.0 && params.rho[1] > 0.0) || !params.g.is_finite() {
            return Err(Error::State(format!("densities {:?} must be positive", params.rho)));
        }
        if !(params.cfl > 0.0) || params.ny < 4 {
            return Err(Error::Domain("integrator needs cfl > 0 and ny >= 4".into()));
        }
        Ok(ReferenceIntegrator { params })
    }

    fn maps(&self, iface: &InterfaceState) -> Result<[Arc<HarmonicMap>; 2]> {
        Ok([HarmonicMap::new(iface, Side::Minus, self.params.ny)?, HarmonicMap::new(iface, Side::Plus, self.params.ny)?])
    }

    /// Potentials with `ρ⁻Φ⁻ - ρ⁺Φ⁺ = μ`, `N·∇Φ⁻ = N·∇Φ⁺` on `Γ_f`, `∂_3Φ = 0` on the walls.
    fn potentials(&self, f: &PeriodicField, mu: &[f64], f_star: f64) -> Result<[StripField; 2]> {
        let iface = InterfaceState::new(f.clone(), PeriodicField::zeros(f.grid()), f_star)?;
        let maps = self.maps(&iface)?;
        let solver = TransmissionSolver::new(&maps[0], &maps[1], [BcKind::Neumann; 2], self.params.rho, [1.0, 1.0])?;
        let nx = f.grid().n(0);
        let zeros = vec![0.0; maps[0].grid.len()];
        let wz = vec![0.0; nx];
        solver.solve(&TransmissionData {
            source: [&zeros, &zeros],
            jump_value: mu,
            jump_flux: &wz,
            wall: [&wz, &wz],
        })
    }

    /// `(∂_t f, ∂_t μ, Φ^±, flux mismatch)` at `(f, μ)`.
    #[allow(clippy::type_complexity)]
    fn rates(&self, f: &PeriodicField, mu: &[f64], f_star: f64) -> Result<(Vec<f64>, Vec<f64>, [StripField; 2], f64)> {
        let phi = self.potentials(f, mu, f_star)?;
        let nm = phi[0].conormal_trace();
        let np = phi[1].conormal_trace();
        let nx = nm.len();
        let ft: Vec<f64> = (0..nx).map(|i| 0.5 * (nm[i] + np[i])).collect();
        let mismatch = (0..nx).fold(0.0f64, |m, i| m.max((nm[i] - np[i]).abs()));
        let fv = f.real_samples();
        let [rm, rp] = self.params.rho;
        let b: Vec<Vec<f64>> = phi
            .iter()
            .map(|p| {
                let v = p.dx().interface_trace();
                let w = p.dz().interface_trace();
                (0..nx).map(|i| 0.5 * (v[i] * v[i] + w[i] * w[i]) - w[i] * ft[i]).collect()
            })
            .collect();
        let mu_t = (0..nx).map(|i| -(rm - rp) * self.params.g * fv[i] - rm * b[0][i] + rp * b[1][i]).collect();
        Ok((ft, mu_t, phi, mismatch))
    }

    fn filtered(&self, grid: &crate::spectral::Grid, v: Vec<f64>) -> Result<PeriodicField> {
        let p = PeriodicField::from_real(grid.clone(), v)?;
        Ok(if self.params.dealias { p.dealias() } else { p })
    }

    pub fn flow(&self, s: &SimState) -> Result<Flow> {
        let (ft, mu_t, phi, flux_mismatch) = self.rates(&s.f, &s.mu.real_samples(), s.f_star)?;
        let interface = InterfaceState::new(s.f.clone(), PeriodicField::from_real(s.f.grid().clone(), ft.clone())?, s.f_star)?;
        let maps = self.maps(&interface)?;
        let mut potential = Vec::with_capacity(2);
        let mut velocity = Vec::with_capacity(2);
        for k in 0..2 {
            let p = StripField::new(maps[k].clone(), phi[k].values().to_vec())?;
            velocity.push(Velocity { u1: p.dx(), u3: p.dz() });
            potential.push(p);
        }
        let [p0, p1]: [StripField; 2] = potential.try_into().expect("two sides");
        let [v0, v1]: [Velocity; 2] = velocity.try_into().expect("two sides");
        Ok(Flow { interface, potential: [p0, p1], velocity: [v0, v1], ft, mu_t, flux_mismatch })
    }

    /// Largest step allowed by the CFL bound for the given flow.
    pub fn max_dt(&self, flow: &Flow, nx: usize) -> f64 {
        let dx = 2.0 * std::f64::consts::PI / nx as f64;
        let u = flow.max_speed();
        if u == 0.0 {
            f64::INFINITY
        } else {
            self.params.cfl * dx / u
        }
    }

    /// One RK4 step.
    pub fn step(&self, s: &SimState, dt: f64) -> Result<SimState> {
        if !(dt > 0.0) {
            return Err(Error::Domain(format!("time step {dt}")));
        }
        let grid = s.f.grid().clone();
        let nx = s.nx();
        let dxg = 2.0 * std::f64::consts::PI / nx as f64;
        let eval = |f: &PeriodicField, mu: &PeriodicField, check: bool| -> Result<(PeriodicField, PeriodicField)> {
            let (ft, mt, phi, _) = self.rates(f, &mu.real_samples(), s.f_star)?;
            if check {
                let speed = phi
                    .iter()
                    .map(|p| Velocity { u1: p.dx(), u3: p.dz() }.max_speed())
                    .fold(0.0, f64::max);
                let cfl = dt * speed / dxg;
                if cfl > self.params.cfl {
                    return Err(Error::Cfl { cfl, limit: self.params.cfl });
                }
            }
            Ok((self.filtered(&grid, ft)?, self.filtered(&grid, mt)?))
        };
        let (k1f, k1m) = eval(&s.f, &s.mu, true)?;
        let (k2f, k2m) = eval(&(&s.f + &(&k1f * (0.5 * dt))), &(&s.mu + &(&k1m * (0.5 * dt))), false)?;
        let (k3f, k3m) = eval(&(&s.f + &(&k2f * (0.5 * dt))), &(&s.mu + &(&k2m * (0.5 * dt))), false)?;
        let (k4f, k4m) = eval(&(&s.f + &(&k3f * dt)), &(&s.mu + &(&k3m * dt)), false)?;
        let comb = |y: &PeriodicField, a: &PeriodicField, b: &PeriodicField, c: &PeriodicField, d: &PeriodicField| {
            let inc = &(&(a + &(b * 2.0)) + &(c * 2.0)) + d;
            y + &(&inc * (dt / 6.0))
        };
        let f = comb(&s.f, &k1f, &k2f, &k3f, &k4f).re();
        let mu = comb(&s.mu, &k1m, &k2m, &k3m, &k4m).re();
        // validates the interface position
        InterfaceState::new(f.clone(), PeriodicField::zeros(&grid), s.f_star)?;
        Ok(SimState { f, mu, f_star: s.f_star, time: s.time + dt, step: s.step + 1 })
    }

    /// `Σ ½ ρ^± ∫ |u^±|²`.
    pub fn kinetic_energy(&self, flow: &Flow) -> f64 {
        (0..2)
            .map(|k| {
                let u = &flow.velocity[k];
                0.5 * self.params.rho[k] * (u.u1.mul(&u.u1).integrate() + u.u3.mul(&u.u3).integrate())
            })
            .sum()
    }

    /// `½ g (ρ⁻ - ρ⁺) ∫ (f - f*)²`.
    pub fn potential_energy(&self, s: &SimState) -> f64 {
        let dx = 2.0 * std::f64::consts::PI / s.nx() as f64;
        let e: f64 = s.f.real_samples().iter().map(|h| (h - s.f_star).powi(2)).sum::<f64>() * dx;
        0.5 * self.params.g * (self.params.rho[0] - self.params.rho[1]) * e
    }

    /// `|Ω⁻| = ∫ (f + 1)`.
    pub fn lower_area(s: &SimState) -> f64 {
        2.0 * std::f64::consts::PI * (s.f.mean().re + 1.0)
    }

    /// Pressure from Bernoulli's law on `Γ_f` (normalized to zero mean) and
    /// `-Δp = ρ tr(∇u)²`, `∂_3 p = -ρ g` in each layer.
    pub fn pressure(&self, s: &SimState, flow: &Flow) -> Result<[StripField; 2]> {
        let grid = s.f.grid().clone();
        let nx = s.nx();
        let delta = 1e-4;
        let ftf = PeriodicField::from_real(grid.clone(), flow.ft.clone())?;
        let mtf = PeriodicField::from_real(grid.clone(), flow.mu_t.clone())?;
        let shifted = |sgn: f64| -> Result<[StripField; 2]> {
            let f = (&s.f + &(&ftf * (sgn * delta))).re();
            let mu = (&s.mu + &(&mtf * (sgn * delta))).re();
            self.potentials(&f, &mu.real_samples(), s.f_star)
        };
        let plus = shifted(1.0)?;
        let minus = shifted(-1.0)?;
        let fv = s.f.real_samples();
        let mut p_gamma = vec![0.0; nx];
        for k in 0..2 {
            let r = self.params.rho[k];
            let (a, b) = (plus[k].interface_trace(), minus[k].interface_trace());
            let v = flow.velocity[k].u1.interface_trace();
            let w = flow.velocity[k].u3.interface_trace();
            for i in 0..nx {
                let psi_t = (a[i] - b[i]) / (2.0 * delta);
                let phi_t = psi_t - w[i] * flow.ft[i];
                p_gamma[i] += -0.5 * r * (phi_t + 0.5 * (v[i] * v[i] + w[i] * w[i]) + self.params.g * fv[i]);
            }
        }
        let mean = p_gamma.iter().sum::<f64>() / nx as f64;
        p_gamma.iter_mut().for_each(|p| *p -= mean);
        let mut out = Vec::with_capacity(2);
        for k in 0..2 {
            let map = flow.velocity[k].map();
            let r = self.params.rho[k];
            let src: Vec<f64> = flow.velocity[k].trace_grad_squared().values().iter().map(|t| -r * t).collect();
            let solver = LaplaceSolver::new(map, BcKind::Dirichlet, BcKind::Neumann)?;
            let v = solver.solve(&src, &p_gamma, &vec![-r * self.params.g; nx])?;
            out.push(StripField::new(map.clone(), v)?);
        }
        let [a, b]: [StripField; 2] = out.try_into().expect("two sides");
        Ok([a, b])
    }

    /// State with velocities and diagnostic pressure for the analysis operations.
    pub fn incompressible_state(&self, s: &SimState, flow: &Flow) -> Result<IncompressibleState> {
        let p = self.pressure(s, flow)?;
        IncompressibleState::new(flow.velocity.clone(), p, self.params.rho, self.params.g)
    }
}
