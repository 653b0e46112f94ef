use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::PeriodicField;

use super::types::{material_derivatives, TwoPhaseState};

/// Jump tolerances: below `zero` a jump counts as absent, above `bounded`
/// (pointwise minimum) as bounded away from zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub zero: f64,
    pub bounded: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { zero: 1e-6, bounded: 1e-2 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discontinuity {
    Shock,
    VortexSheet,
    EntropyWave,
    Continuous,
}

impl Discontinuity {
    pub fn label(self) -> &'static str {
        match self {
            Discontinuity::Shock => "shock",
            Discontinuity::VortexSheet => "vortex_sheet",
            Discontinuity::EntropyWave => "entropy_wave",
            Discontinuity::Continuous => "continuous",
        }
    }
}

/// Sup norms of the traces on `Γ_f`; `min_*` are pointwise minima of `|⟦·⟧|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceReport {
    pub class: Discontinuity,
    /// `max_± |ρ(u·N - ∂_t f)|`.
    pub mass_flux: f64,
    pub jump_p: f64,
    pub jump_u_normal: f64,
    pub jump_u_tangential: f64,
    pub jump_rho: f64,
    pub min_jump_rho: f64,
    pub jump_s: Option<f64>,
    pub min_jump_s: Option<f64>,
    /// `m_N = 0` together with `⟦p⟧ = ⟦u·N⟧ = 0`, or a non-characteristic front.
    pub rh_contact: bool,
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, a| m.max(a.abs()))
}

fn inf_abs(v: &[f64]) -> f64 {
    v.iter().fold(f64::INFINITY, |m, a| m.min(a.abs()))
}

fn jump(minus: &[f64], plus: &[f64]) -> Vec<f64> {
    plus.iter().zip(minus).map(|(a, b)| a - b).collect()
}

/// `(∫_T v²)^{1/2}`.
pub(crate) fn line_l2(v: &[f64]) -> f64 {
    let dx = 2.0 * std::f64::consts::PI / v.len() as f64;
    (v.iter().map(|a| a * a).sum::<f64>() * dx).sqrt()
}

pub fn classify_discontinuity(state: &TwoPhaseState, tol: Tolerances) -> TraceReport {
    let iface = state.interface();
    let fx = state.map(0).fx().to_vec();
    let ft = iface.ft.real_samples();
    let n = fx.len();
    let mut un = Vec::new();
    let mut ut = Vec::new();
    let mut mass: f64 = 0.0;
    let mut rho_t = Vec::new();
    for k in 0..2 {
        let u = state.velocity(k);
        let (a, b) = (u.u1.interface_trace(), u.u3.interface_trace());
        let r = state.density(k).interface_trace();
        let normal: Vec<f64> = (0..n).map(|i| b[i] - fx[i] * a[i]).collect();
        let tang: Vec<f64> = (0..n).map(|i| a[i] + fx[i] * b[i]).collect();
        for i in 0..n {
            mass = mass.max((r[i] * (normal[i] - ft[i])).abs());
        }
        un.push(normal);
        ut.push(tang);
        rho_t.push(r);
    }
    let jp = jump(&state.pressure(0).interface_trace(), &state.pressure(1).interface_trace());
    let jun = jump(&un[0], &un[1]);
    let jut = jump(&ut[0], &ut[1]);
    let jr = jump(&rho_t[0], &rho_t[1]);
    let js = match (state.entropy(0), state.entropy(1)) {
        (Some(a), Some(b)) => Some(jump(&a.interface_trace(), &b.interface_trace())),
        _ => None,
    };
    let zero = |v: f64| v <= tol.zero;
    let (jump_p, jump_u_normal, jump_u_tangential) = (sup(&jp), sup(&jun), sup(&jut));
    let rh_contact = zero(mass) && zero(jump_p) && zero(jump_u_normal);
    let density_jump = inf_abs(&jr) >= tol.bounded && js.as_ref().map_or(true, |s| inf_abs(s) >= tol.bounded);
    let class = if !rh_contact {
        Discontinuity::Shock
    } else if !zero(jump_u_tangential) {
        Discontinuity::VortexSheet
    } else if density_jump {
        Discontinuity::EntropyWave
    } else {
        Discontinuity::Continuous
    };
    TraceReport {
        class,
        mass_flux: mass,
        jump_p,
        jump_u_normal,
        jump_u_tangential,
        jump_rho: sup(&jr),
        min_jump_rho: inf_abs(&jr),
        jump_s: js.as_ref().map(|s| sup(s)),
        min_jump_s: js.as_ref().map(|s| inf_abs(s)),
        rh_contact,
    }
}

/// `L²(Γ_f)` norms of `⟦D_t^l p⟧` and `⟦D_t^l u⟧` (vector norm); `None` when
/// the state does not determine the derivative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatLevel {
    pub l: usize,
    pub p: Option<f64>,
    pub u: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub levels: Vec<CompatLevel>,
    /// `‖⟦u·τ⟧‖` and `‖⟦u·N⟧‖` at order 0.
    pub u_tangential: f64,
    pub u_normal: f64,
}

impl CompatibilityReport {
    /// Largest available residual up to order `l`.
    pub fn max_up_to(&self, l: usize) -> f64 {
        self.levels
            .iter()
            .filter(|c| c.l <= l)
            .flat_map(|c| [c.p, c.u])
            .flatten()
            .fold(0.0, f64::max)
    }
}

pub fn check_compatibility(state: &TwoPhaseState, order: usize) -> Result<CompatibilityReport> {
    if order > 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    let d = [material_derivatives(state, 0, order)?, material_derivatives(state, 1, order)?];
    let fx = state.map(0).fx().to_vec();
    let vec_jump = |a: [&crate::elliptic::Velocity; 2]| {
        let j1 = jump(&a[0].u1.interface_trace(), &a[1].u1.interface_trace());
        let j3 = jump(&a[0].u3.interface_trace(), &a[1].u3.interface_trace());
        let mag: Vec<f64> = j1.iter().zip(&j3).map(|(a, b)| (a * a + b * b).sqrt()).collect();
        (line_l2(&mag), j1, j3)
    };
    let scalar_jump = |a: [&crate::geometry::StripField; 2]| line_l2(&jump(&a[0].interface_trace(), &a[1].interface_trace()));
    let (u0, j1, j3) = vec_jump([state.velocity(0), state.velocity(1)]);
    let ut: Vec<f64> = (0..fx.len()).map(|i| j1[i] + fx[i] * j3[i]).collect();
    let unn: Vec<f64> = (0..fx.len()).map(|i| j3[i] - fx[i] * j1[i]).collect();
    let mut levels = vec![CompatLevel {
        l: 0,
        p: Some(scalar_jump([state.pressure(0), state.pressure(1)])),
        u: Some(u0),
    }];
    if order >= 1 {
        levels.push(CompatLevel {
            l: 1,
            p: match (&d[0].dtp, &d[1].dtp) {
                (Some(a), Some(b)) => Some(scalar_jump([a, b])),
                _ => None,
            },
            u: match (&d[0].dtu, &d[1].dtu) {
                (Some(a), Some(b)) => Some(vec_jump([a, b]).0),
                _ => None,
            },
        });
    }
    if order >= 2 {
        levels.push(CompatLevel {
            l: 2,
            p: match (&d[0].dt2p, &d[1].dt2p) {
                (Some(a), Some(b)) => Some(scalar_jump([a, b])),
                _ => None,
            },
            u: match (&d[0].dt2u, &d[1].dt2u) {
                (Some(a), Some(b)) => Some(vec_jump([a, b]).0),
                _ => None,
            },
        });
    }
    Ok(CompatibilityReport { levels, u_tangential: line_l2(&ut), u_normal: line_l2(&unn) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentialReport {
    /// `max_± ‖∂̄_1 (p^±|_{Γ_f})‖_{L²(T)}`.
    pub residual: f64,
    /// Mean interface pressure over both traces.
    pub q: f64,
    /// Tangential pressure gradient together with a density jump.
    pub kh_degenerate: bool,
}

pub fn tangential_pressure_check(state: &TwoPhaseState, tol: Tolerances) -> TangentialReport {
    let grid = state.interface().grid().clone();
    let mut residual: f64 = 0.0;
    let mut total = 0.0;
    let mut count = 0usize;
    for k in 0..2 {
        let tr = state.pressure(k).interface_trace();
        total += tr.iter().sum::<f64>();
        count += tr.len();
        let d = PeriodicField::from_real(grid.clone(), tr).expect("interface grid").derivative(0);
        residual = residual.max(line_l2(&d.real_samples()));
    }
    let jr = jump(&state.density(0).interface_trace(), &state.density(1).interface_trace());
    let kh_degenerate = residual > tol.zero && sup(&jr) > tol.zero;
    TangentialReport { residual, q: total / count as f64, kh_degenerate }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    /// `𝔞 = ⟦∂_3 p⟧/(ρ⁺ + ρ⁻)` on the grid of `Γ_f`.
    pub a: Vec<f64>,
    pub min: f64,
    /// `⟦∇_N p⟧/((ρ⁺ + ρ⁻)(1 + |∇f|²))`.
    pub normal_form: Vec<f64>,
    /// `max |𝔞 - normal form|`.
    pub agreement: f64,
    /// Tangential residual of the pressure traces.
    pub tangential: f64,
}

impl TaylorReport {
    /// The two forms must agree once `∂̄ p|_{Γ_f} = 0`.
    pub fn consistent(&self, tol: Tolerances) -> bool {
        self.tangential > tol.zero || self.agreement <= 1e-8 * (1.0 + self.min.abs())
    }
}

pub fn taylor_sign(state: &TwoPhaseState) -> TaylorReport {
    let fx = state.map(0).fx().to_vec();
    let n = fx.len();
    let dz = [state.pressure(0).dz().interface_trace(), state.pressure(1).dz().interface_trace()];
    let dn = [state.pressure(0).conormal_trace(), state.pressure(1).conormal_trace()];
    let rho = [state.density(0).interface_trace(), state.density(1).interface_trace()];
    let mut a = vec![0.0; n];
    let mut alt = vec![0.0; n];
    for i in 0..n {
        let s = rho[0][i] + rho[1][i];
        a[i] = (dz[1][i] - dz[0][i]) / s;
        alt[i] = (dn[1][i] - dn[0][i]) / (s * (1.0 + fx[i] * fx[i]));
    }
    let agreement = a.iter().zip(&alt).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let min = a.iter().cloned().fold(f64::INFINITY, f64::min);
    let tangential = tangential_pressure_check(state, Tolerances::default()).residual;
    TaylorReport { a, min, normal_form: alt, agreement, tangential }
}
