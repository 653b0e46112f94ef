use serde::{Deserialize, Serialize};

use crate::dn::{DnOperator, LambdaSymbol};
use crate::elliptic::{solve_laplace, Boundary, EllipticProblem};
use crate::error::{Error, Result};
use crate::geometry::{harmonic_extension_on, StripField};
use crate::spectral::{paradiff_apply, PeriodicField};
use crate::state::{taylor_sign, TaylorReport, TwoPhaseState};

/// `∂̄_i p` from its elliptic system: `Δ∂̄_i p = ∂_iΔp + ℋ∂_3Δp + 2∇ℋ·∇∂_3 p`
/// with `ℋ = ℋ(∂̄_i f)`, `∂̄_i p = ∂̄_i(p|_{Γ_f})` on `Γ_f` and
/// `∂_3∂̄_i p = ∂_i∂_3 p + ∂_3ℋ ∂_3 p` on the wall.
pub fn tangential_pressure_field(p: &StripField, h: &StripField) -> Result<StripField> {
    let map = p.map();
    let lap = p.laplacian();
    let [lx, lz] = lap.gradient();
    let [hx, hz] = h.gradient();
    let pz = p.dz();
    let [pzx, pzz] = pz.gradient();
    let n = lap.values().len();
    let src: Vec<f64> = (0..n)
        .map(|m| {
            lx.values()[m]
                + h.values()[m] * lz.values()[m]
                + 2.0 * (hx.values()[m] * pzx.values()[m] + hz.values()[m] * pzz.values()[m])
        })
        .collect();
    let iface = p.row_field(0).derivative(0).real_samples();
    let pxz = p.dx().dz().wall_trace();
    let (hzw, pzw) = (hz.wall_trace(), pz.wall_trace());
    let wall: Vec<f64> = (0..pxz.len()).map(|i| pxz[i] + hzw[i] * pzw[i]).collect();
    solve_laplace(&EllipticProblem::new(map, src, Boundary::Dirichlet(iface), Boundary::Neumann(wall)))
}

/// Decomposition `D_t²∂̄_i f = -𝔞 T_λ ∂̄_i f + 𝒩⁺ + 𝒩⁻` on the grid of `Γ_f`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AccelerationTerms {
    pub principal: Vec<f64>,
    /// `[𝒩⁻, 𝒩⁺]`.
    pub lower: [Vec<f64>; 2],
    pub total: Vec<f64>,
    /// `[∇_N ∂̄_i p⁻, ∇_N ∂̄_i p⁺]`.
    pub normal_tangential_pressure: [Vec<f64>; 2],
    pub taylor: TaylorReport,
    /// `𝔞` takes both signs on `Γ_f`.
    pub sign_change: bool,
}

/// `𝒩^± = -(1/Σρ) ∇_N∂̄_i p^± - (2ρ^±/Σρ) ∂̄_i u_j D_t∂̄_j f ∓ (∂_3 p^±/Σρ) R^±∂̄_i f`,
/// plus `(∂̄_iρ^±/(Σρ ρ^±)) ∇_N p^±` for compressible phases. `R^± = 𝒢^± - T_λ`
/// and `ℋ^±` use Dirichlet walls. `D_t∂̄_1 f = ∂_t∂_1 f + u_1^± ∂_1² f`.
pub fn interface_acceleration(state: &TwoPhaseState, i: usize) -> Result<AccelerationTerms> {
    let iface = state.interface();
    if iface.dim() != 1 {
        return Err(Error::UnsupportedDimension(iface.dim()));
    }
    if i != 0 {
        return Err(Error::Domain(format!("horizontal index {i} on a one-dimensional interface")));
    }
    let grid = iface.grid().clone();
    let g = iface.f.derivative(0).re();
    let gs = g.real_samples();
    let gx = g.derivative(0).real_samples();
    let gt = iface.ft.derivative(0).real_samples();
    let nx = gs.len();
    let taylor = taylor_sign(state);
    let tl = paradiff_apply(&LambdaSymbol::new(iface), &g)?.real_samples();
    let principal: Vec<f64> = (0..nx).map(|n| -taylor.a[n] * tl[n]).collect();
    let rho_t = [state.density(0).interface_trace(), state.density(1).interface_trace()];
    let mut lower = [vec![0.0; nx], vec![0.0; nx]];
    let mut nd = [vec![0.0; nx], vec![0.0; nx]];
    for k in 0..2 {
        let p = state.pressure(k);
        let map = p.map();
        let sgn = if k == 0 { -1.0 } else { 1.0 };
        let h = harmonic_extension_on(map, &gs)?;
        let w = tangential_pressure_field(p, &h)?;
        let nw = w.conormal_trace();
        let rem = DnOperator::on_map(map, crate::elliptic::BcKind::Dirichlet)?.remainder(&g)?.real_samples();
        let dz = p.dz().interface_trace();
        let u1 = state.velocity(k).u1.interface_trace();
        let du1 = PeriodicField::from_real(grid.clone(), u1.clone())?.derivative(0).real_samples();
        let comp = state.is_compressible().then(|| {
            let r = PeriodicField::from_real(grid.clone(), rho_t[k].clone()).expect("grid").derivative(0).real_samples();
            (r, p.conormal_trace())
        });
        for n in 0..nx {
            let s = rho_t[0][n] + rho_t[1][n];
            let dtg = gt[n] + u1[n] * gx[n];
            let mut v = -nw[n] / s - 2.0 * rho_t[k][n] / s * du1[n] * dtg - sgn * dz[n] / s * rem[n];
            if let Some((dr, np)) = &comp {
                v += dr[n] / (s * rho_t[k][n]) * np[n];
            }
            lower[k][n] = v;
        }
        nd[k] = nw;
    }
    let total = (0..nx).map(|n| principal[n] + lower[0][n] + lower[1][n]).collect();
    let (mn, mx) = taylor.a.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    Ok(AccelerationTerms {
        principal,
        lower,
        total,
        normal_tangential_pressure: nd,
        sign_change: mn < 0.0 && mx > 0.0,
        taylor,
    })
}
