use super::divcurl::Velocity;
use crate::error::{Error, Result};
use crate::geometry::StripField;
use crate::state::eos_density;

/// Fields of one compressible phase entering the pressure equation.
#[derive(Clone, Copy)]
pub struct CompressiblePhase<'a> {
    pub p: &'a StripField,
    pub u: &'a Velocity,
    pub s: &'a StripField,
    pub dtp: Option<&'a StripField>,
    pub dt2p: Option<&'a StripField>,
}

/// Norms of the defects of the elliptic form of the pressure wave equation.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    /// `‖Δp - [(ρ/γp) D_t²p - ρ tr(∇u)² + ℳ_p]‖_{L²(Ω^±)}`, `[minus, plus]`.
    pub interior: [f64; 2],
    /// `‖p - q‖_{L²(Γ_f)}`.
    pub interface: [f64; 2],
    /// `‖∂_3 p‖_{L²(Γ^±)}`.
    pub wall: [f64; 2],
    /// Mean interface pressure `q`.
    pub q: f64,
}

fn l2_line(v: &[f64]) -> f64 {
    let dx = 2.0 * std::f64::consts::PI / v.len() as f64;
    (v.iter().map(|a| a * a).sum::<f64>() * dx).sqrt()
}

/// `ℳ_p = -(ρ/γp²)(D_t p)² + ∇ρ·∇p/ρ` and the full interior defect of one phase.
fn interior_defect(ph: &CompressiblePhase<'_>, a: f64, gamma: f64, label: &str) -> Result<StripField> {
    let dtp = ph.dtp.ok_or_else(|| Error::IncompleteState(format!("D_t p on side {label}")))?;
    let dt2p = ph.dt2p.ok_or_else(|| Error::IncompleteState(format!("D_t^2 p on side {label}")))?;
    let rho_vals = ph
        .p
        .values()
        .iter()
        .zip(ph.s.values())
        .map(|(&p, &s)| eos_density(p, s, a, gamma))
        .collect::<Result<Vec<f64>>>()?;
    let rho = ph.p.with_values(rho_vals);
    let (px, pz) = (ph.p.dx(), ph.p.dz());
    let (rx, rz) = (rho.dx(), rho.dz());
    let lap = ph.p.laplacian();
    let tr = ph.u.trace_grad_squared();
    let v = (0..lap.values().len())
        .map(|n| {
            let p = ph.p.values()[n];
            let r = rho.values()[n];
            let d1 = dtp.values()[n];
            let m_p = -r / (gamma * p * p) * d1 * d1 + (rx.values()[n] * px.values()[n] + rz.values()[n] * pz.values()[n]) / r;
            lap.values()[n] - (r / (gamma * p) * dt2p.values()[n] - r * tr.values()[n] + m_p)
        })
        .collect();
    Ok(ph.p.with_values(v))
}

/// Residuals of `Δp = (ρ/γp) D_t²p - ρ tr(∇u)² + ℳ_p` in `Ω^±`,
/// `p = q(t)` on `Γ_f` and `∂_3 p = 0` on the walls.
pub fn compressible_pressure_consistency(
    phases: [&CompressiblePhase<'_>; 2],
    a: f64,
    gamma: f64,
) -> Result<ConsistencyReport> {
    let labels = ["minus", "plus"];
    let traces: Vec<Vec<f64>> = phases.iter().map(|ph| ph.p.interface_trace()).collect();
    let nx = traces[0].len();
    let q = traces.iter().flatten().sum::<f64>() / (2 * nx) as f64;
    let mut report = ConsistencyReport { interior: [0.0; 2], interface: [0.0; 2], wall: [0.0; 2], q };
    for k in 0..2 {
        let ph = phases[k];
        let d = interior_defect(ph, a, gamma, labels[k])?;
        report.interior[k] = d.l2_norm();
        report.interface[k] = l2_line(&traces[k].iter().map(|p| p - q).collect::<Vec<_>>());
        report.wall[k] = l2_line(&ph.p.dz().wall_trace());
    }
    Ok(report)
}
