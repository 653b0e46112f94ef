use serde::{Deserialize, Serialize};

use crate::elliptic::Velocity;
use crate::error::{Error, Result};
use crate::geometry::StripField;
use crate::spectral::{sobolev_norm, PeriodicField};

use super::types::{material_derivatives, TwoPhaseState};

pub const DEFAULT_KAPPA: usize = 4;

/// `(Σ_{|α| ≤ s} ‖∂^α v‖²_{L²(Ω)})^{1/2}` with physical derivatives and
/// physical-domain quadrature.
pub fn domain_sobolev_norm(v: &StripField, s: usize) -> f64 {
    // level m holds ∂_1^a ∂_3^{m-a} v for a = 0..=m
    let mut level = vec![v.clone()];
    let mut total = v.mul(v).integrate();
    for m in 1..=s {
        let mut next = Vec::with_capacity(m + 1);
        for w in &level {
            next.push(w.dz());
        }
        next.push(level[m - 1].dx());
        for w in &next {
            total += w.mul(w).integrate();
        }
        level = next;
    }
    total.max(0.0).sqrt()
}

fn velocity_norm(u: &Velocity, s: usize) -> f64 {
    (domain_sobolev_norm(&u.u1, s).powi(2) + domain_sobolev_norm(&u.u3, s).powi(2)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyEntry {
    pub name: String,
    /// Sobolev index used for this entry.
    pub order: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub kappa: usize,
    /// Highest material-derivative order included.
    pub truncation: usize,
    pub e: Vec<EnergyEntry>,
    pub f: Vec<EnergyEntry>,
    pub e_total: f64,
    pub f_total: f64,
    pub resolution_warning: Option<String>,
}

impl EnergyReport {
    pub fn e_entry(&self, name: &str) -> Option<f64> {
        self.e.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn f_entry(&self, name: &str) -> Option<f64> {
        self.f.iter().find(|e| e.name == name).map(|e| e.value)
    }
}

const SIDES: [&str; 2] = ["minus", "plus"];

/// Energy norms `ℰ` and `ℱ` of a state, with material derivatives substituted
/// from the equations up to order `trunc` (where the state determines them).
/// Interface norms are spectral; domain norms use [`domain_sobolev_norm`].
pub fn energy_norm(state: &TwoPhaseState, kappa: usize, trunc: usize) -> Result<EnergyReport> {
    if trunc > 2 {
        return Err(Error::UnsupportedOrder(trunc));
    }
    if kappa < 2 {
        return Err(Error::Domain(format!("kappa = {kappa} needs to be at least 2")));
    }
    let k = kappa as f64;
    let iface = state.interface();
    let grid = iface.grid().clone();
    // D_t f = u_3 on Γ_f, averaged over the two traces
    let t0 = state.velocity(0).u3.interface_trace();
    let t1 = state.velocity(1).u3.interface_trace();
    let dtf = PeriodicField::from_real(grid.clone(), t0.iter().zip(&t1).map(|(a, b)| 0.5 * (a + b)).collect())?;
    let mut e = vec![
        EnergyEntry { name: "f".into(), order: k, value: sobolev_norm(&iface.f, k)? },
        EnergyEntry { name: "D_t f".into(), order: k - 0.5, value: sobolev_norm(&dtf, k - 0.5)? },
    ];
    let mut f = vec![];
    let mut used = 0;
    let compressible = state.is_compressible();
    for side in 0..2 {
        let tag = SIDES[side];
        let u = state.velocity(side);
        let p = state.pressure(side);
        e.push(EnergyEntry { name: format!("u[{tag}]"), order: k, value: velocity_norm(u, kappa) });
        e.push(EnergyEntry { name: format!("p[{tag}]"), order: k, value: domain_sobolev_norm(p, kappa) });
        f.push(EnergyEntry { name: format!("u[{tag}]"), order: k - 1.0, value: velocity_norm(u, kappa - 1) });
        f.push(EnergyEntry { name: format!("p[{tag}]"), order: k - 1.0, value: domain_sobolev_norm(p, kappa - 1) });
        if let Some(s) = state.entropy(side) {
            e.push(EnergyEntry { name: format!("S[{tag}]"), order: k, value: domain_sobolev_norm(s, kappa) });
            f.push(EnergyEntry { name: format!("S[{tag}]"), order: k - 1.0, value: domain_sobolev_norm(s, kappa - 1) });
        }
        if !compressible {
            // the incompressible ℰ carries no material derivatives
            continue;
        }
        let md = material_derivatives(state, side, trunc)?;
        if let Some(v) = &md.dtu {
            used = used.max(1);
            e.push(EnergyEntry { name: format!("D_t u[{tag}]"), order: k - 1.0, value: velocity_norm(v, kappa - 1) });
            f.push(EnergyEntry { name: format!("D_t u[{tag}]"), order: k - 1.0, value: velocity_norm(v, kappa - 1) });
        }
        if let Some(v) = &md.dtp {
            e.push(EnergyEntry { name: format!("D_t p[{tag}]"), order: k, value: domain_sobolev_norm(v, kappa) });
            f.push(EnergyEntry { name: format!("D_t p[{tag}]"), order: k - 1.0, value: domain_sobolev_norm(v, kappa - 1) });
            // D_t S = 0 identically
            e.push(EnergyEntry { name: format!("D_t S[{tag}]"), order: k, value: 0.0 });
            f.push(EnergyEntry { name: format!("D_t S[{tag}]"), order: k - 1.0, value: 0.0 });
        }
        if let Some(v) = &md.dt2u {
            used = used.max(2);
            e.push(EnergyEntry { name: format!("D_t^2 u[{tag}]"), order: k - 1.0, value: velocity_norm(v, kappa - 1) });
            f.push(EnergyEntry { name: format!("D_t^2 u[{tag}]"), order: k - 2.0, value: velocity_norm(v, kappa - 2) });
        }
        if let Some(v) = &md.dt2p {
            e.push(EnergyEntry { name: format!("D_t^2 p[{tag}]"), order: k - 1.0, value: domain_sobolev_norm(v, kappa - 1) });
            f.push(EnergyEntry { name: format!("D_t^2 p[{tag}]"), order: k - 2.0, value: domain_sobolev_norm(v, kappa - 2) });
            e.push(EnergyEntry { name: format!("D_t^2 S[{tag}]"), order: k - 1.0, value: 0.0 });
            f.push(EnergyEntry { name: format!("D_t^2 S[{tag}]"), order: k - 2.0, value: 0.0 });
        }
    }
    for entry in e.iter().chain(&f) {
        if !entry.value.is_finite() {
            return Err(Error::InvalidField(format!("energy entry {} is not finite", entry.name)));
        }
    }
    let e_total = e.iter().map(|x| x.value).sum();
    let f_total = f.iter().map(|x| x.value).sum();
    Ok(EnergyReport {
        kappa,
        truncation: used,
        e,
        f,
        e_total,
        f_total,
        resolution_warning: resolution_warning(&iface.f, k),
    })
}

/// Warns when more than `1e-6` of `‖f‖²_{H^κ}` sits above two thirds of the
/// resolved band.
fn resolution_warning(f: &PeriodicField, k: f64) -> Option<String> {
    let g = f.grid();
    let cut = (0..g.dim()).map(|a| g.n(a) as f64 / 3.0).fold(f64::INFINITY, f64::min);
    let (mut all, mut tail) = (0.0, 0.0);
    for (n, c) in f.coefficients().iter().enumerate() {
        let xi = g.frequency(n);
        let w = (1.0 + xi[0] * xi[0] + xi[1] * xi[1]).powf(k) * c.norm_sqr();
        if g.frequency_norm(n) == 0.0 {
            continue;
        }
        all += w;
        if xi[0].abs().max(xi[1].abs()) > cut {
            tail += w;
        }
    }
    (all > 0.0 && tail > 1e-6 * all).then(|| {
        format!("grid cannot represent H^{k}: {:.2e} of the interface energy is in the top third of the band", tail / all)
    })
}
