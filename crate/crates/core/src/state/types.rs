use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::elliptic::Velocity;
use crate::error::{Error, Result};
use crate::geometry::{HarmonicMap, InterfaceState, Side, StripField};
use crate::spectral::PeriodicField;

use super::eos::eos_density;

/// Physical constants carried by a state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Constants {
    Compressible { a: f64, gamma: f64 },
    /// `rho = [ρ⁻, ρ⁺]`; `g` is the downward body force (0 for the unforced system).
    Incompressible { rho: [f64; 2], g: f64 },
}

#[derive(Clone, Debug)]
pub struct CompressibleState {
    pub interface: InterfaceState,
    pub p: [StripField; 2],
    pub u: [Velocity; 2],
    pub s: [StripField; 2],
    pub a: f64,
    pub gamma: f64,
}

impl CompressibleState {
    pub fn new(p: [StripField; 2], u: [Velocity; 2], s: [StripField; 2], a: f64, gamma: f64) -> Result<Self> {
        check_sides(&[&p[0], &u[0].u1, &u[0].u3, &s[0]], &[&p[1], &u[1].u1, &u[1].u3, &s[1]])?;
        for k in 0..2 {
            if let Some(v) = p[k].values().iter().find(|v| !(**v > 0.0)) {
                return Err(Error::State(format!("pressure {v} on side {}", p[k].side().label())));
            }
            for (&pv, &sv) in p[k].values().iter().zip(s[k].values()) {
                eos_density(pv, sv, a, gamma)?;
            }
        }
        let interface = p[0].map().interface.clone();
        Ok(CompressibleState { interface, p, u, s, a, gamma })
    }

    pub fn density(&self, k: usize) -> StripField {
        let v = self.p[k]
            .values()
            .iter()
            .zip(self.s[k].values())
            .map(|(&p, &s)| eos_density(p, s, self.a, self.gamma).expect("validated state"))
            .collect();
        self.p[k].with_values(v)
    }
}

#[derive(Clone, Debug)]
pub struct IncompressibleState {
    pub interface: InterfaceState,
    pub u: [Velocity; 2],
    pub p: [StripField; 2],
    pub rho: [f64; 2],
    pub g: f64,
}

impl IncompressibleState {
    /// Divergence tolerance of the constructor, relative to `1 + max|∇u|`.
    pub const DIV_TOL: f64 = 1e-6;

    pub fn new(u: [Velocity; 2], p: [StripField; 2], rho: [f64; 2], g: f64) -> Result<Self> {
        check_sides(&[&p[0], &u[0].u1, &u[0].u3], &[&p[1], &u[1].u1, &u[1].u3])?;
        if !(rho[0] > 0.0 && rho[1] > 0.0) || !g.is_finite() {
            return Err(Error::State(format!("densities {rho:?} must be positive")));
        }
        for v in &u {
            let grad = v.u1.dx().max_abs() + v.u1.dz().max_abs() + v.u3.dx().max_abs() + v.u3.dz().max_abs();
            let div = v.divergence().max_abs();
            if div > Self::DIV_TOL * (1.0 + grad) {
                return Err(Error::State(format!("divergence {div:.3e} on side {}", v.map().side().label())));
            }
        }
        let interface = p[0].map().interface.clone();
        Ok(IncompressibleState { interface, u, p, rho, g })
    }
}

fn check_sides(minus: &[&StripField], plus: &[&StripField]) -> Result<()> {
    for (set, side) in [(minus, Side::Minus), (plus, Side::Plus)] {
        for f in set {
            if f.side() != side {
                return Err(Error::Shape("fields must be ordered [minus, plus]".into()));
            }
            if f.values().iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidField("non-finite state value".into()));
            }
        }
    }
    let (a, b) = (&minus[0].map().interface, &plus[0].map().interface);
    if a.f.max_diff(&b.f) > 0.0 || a.ft.max_diff(&b.ft) > 0.0 || a.f_star != b.f_star {
        return Err(Error::Shape("the two phases see different interfaces".into()));
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub enum TwoPhaseState {
    Compressible(CompressibleState),
    Incompressible(IncompressibleState),
}

impl From<CompressibleState> for TwoPhaseState {
    fn from(s: CompressibleState) -> Self {
        TwoPhaseState::Compressible(s)
    }
}

impl From<IncompressibleState> for TwoPhaseState {
    fn from(s: IncompressibleState) -> Self {
        TwoPhaseState::Incompressible(s)
    }
}

impl TwoPhaseState {
    pub fn interface(&self) -> &InterfaceState {
        match self {
            TwoPhaseState::Compressible(s) => &s.interface,
            TwoPhaseState::Incompressible(s) => &s.interface,
        }
    }

    pub fn constants(&self) -> Constants {
        match self {
            TwoPhaseState::Compressible(s) => Constants::Compressible { a: s.a, gamma: s.gamma },
            TwoPhaseState::Incompressible(s) => Constants::Incompressible { rho: s.rho, g: s.g },
        }
    }

    pub fn is_compressible(&self) -> bool {
        matches!(self, TwoPhaseState::Compressible(_))
    }

    pub fn map(&self, k: usize) -> &Arc<HarmonicMap> {
        self.pressure(k).map()
    }

    pub fn nx(&self) -> usize {
        self.map(0).nx()
    }

    pub fn ny(&self) -> usize {
        self.map(0).ny()
    }

    pub fn pressure(&self, k: usize) -> &StripField {
        match self {
            TwoPhaseState::Compressible(s) => &s.p[k],
            TwoPhaseState::Incompressible(s) => &s.p[k],
        }
    }

    pub fn velocity(&self, k: usize) -> &Velocity {
        match self {
            TwoPhaseState::Compressible(s) => &s.u[k],
            TwoPhaseState::Incompressible(s) => &s.u[k],
        }
    }

    pub fn entropy(&self, k: usize) -> Option<&StripField> {
        match self {
            TwoPhaseState::Compressible(s) => Some(&s.s[k]),
            TwoPhaseState::Incompressible(_) => None,
        }
    }

    pub fn density(&self, k: usize) -> StripField {
        match self {
            TwoPhaseState::Compressible(s) => s.density(k),
            TwoPhaseState::Incompressible(s) => StripField::constant(s.p[k].map(), s.rho[k]),
        }
    }

    /// The same state seen after the reflection `z ↦ -z`: the sides swap,
    /// `f ↦ -f`, `u_3 ↦ -u_3`, and the body force changes sign.
    pub fn reflected(&self) -> Result<TwoPhaseState> {
        let i = self.interface();
        let neg = |v: &PeriodicField| v.scale(-1.0);
        let mirrored = InterfaceState::new(neg(&i.f), neg(&i.ft), -i.f_star)?;
        let ny = self.ny();
        // new minus side = old plus side
        let maps = [HarmonicMap::new(&mirrored, Side::Minus, ny)?, HarmonicMap::new(&mirrored, Side::Plus, ny)?];
        let move_field = |f: &StripField, k: usize, s: f64| -> Result<StripField> {
            StripField::new(maps[k].clone(), f.values().iter().map(|v| s * v).collect())
        };
        let vel = |v: &Velocity, k: usize| -> Result<Velocity> {
            Ok(Velocity { u1: move_field(&v.u1, k, 1.0)?, u3: move_field(&v.u3, k, -1.0)? })
        };
        Ok(match self {
            TwoPhaseState::Compressible(s) => CompressibleState::new(
                [move_field(&s.p[1], 0, 1.0)?, move_field(&s.p[0], 1, 1.0)?],
                [vel(&s.u[1], 0)?, vel(&s.u[0], 1)?],
                [move_field(&s.s[1], 0, 1.0)?, move_field(&s.s[0], 1, 1.0)?],
                s.a,
                s.gamma,
            )?
            .into(),
            TwoPhaseState::Incompressible(s) => IncompressibleState::new(
                [vel(&s.u[1], 0)?, vel(&s.u[0], 1)?],
                [move_field(&s.p[1], 0, 1.0)?, move_field(&s.p[0], 1, 1.0)?],
                [s.rho[1], s.rho[0]],
                -s.g,
            )?
            .into(),
        })
    }
}

/// Material derivatives of one phase obtained by substituting the equations
/// of motion; `None` where the state does not determine them.
#[derive(Clone, Debug)]
pub struct MaterialDerivatives {
    pub dtp: Option<StripField>,
    pub dtu: Option<Velocity>,
    pub dt2p: Option<StripField>,
    pub dt2u: Option<Velocity>,
}

/// Compressible phases: `D_t p = -γ p ∇·u`, `D_t u = -∇p/ρ`,
/// `D_t² p = γ² p (∇·u)² + γ p ∇·(∇p/ρ) + γ p tr(∇u)²`,
/// `D_t² u = -(∇D_t p - (∇u)ᵀ∇p)/ρ - ∇p (∇·u)/ρ`.
/// Incompressible phases only determine `D_t u = -∇p/ρ - g e_3`.
pub fn material_derivatives(state: &TwoPhaseState, k: usize, order: usize) -> Result<MaterialDerivatives> {
    if order > 2 {
        return Err(Error::UnsupportedOrder(order));
    }
    let mut out = MaterialDerivatives { dtp: None, dtu: None, dt2p: None, dt2u: None };
    if order == 0 {
        return Ok(out);
    }
    let p = state.pressure(k);
    let u = state.velocity(k);
    let [px, pz] = p.gradient();
    match state {
        TwoPhaseState::Incompressible(s) => {
            let r = s.rho[k];
            out.dtu = Some(Velocity { u1: px.scale(-1.0 / r), u3: pz.map_values(|v| -v / r - s.g) });
        }
        TwoPhaseState::Compressible(s) => {
            let gamma = s.gamma;
            let rho = s.density(k);
            let div = u.divergence();
            let dtp = p.zip_with(&div, |p, d| -gamma * p * d);
            let ax = px.zip_with(&rho, |a, r| a / r);
            let az = pz.zip_with(&rho, |a, r| a / r);
            out.dtu = Some(Velocity { u1: ax.scale(-1.0), u3: az.scale(-1.0) });
            if order >= 2 {
                let divq = &ax.dx() + &az.dz();
                let tr = u.trace_grad_squared();
                let v = (0..p.values().len())
                    .map(|n| {
                        let (pv, d) = (p.values()[n], div.values()[n]);
                        gamma * gamma * pv * d * d + gamma * pv * (divq.values()[n] + tr.values()[n])
                    })
                    .collect();
                out.dt2p = Some(p.with_values(v));
                let [qx, qz] = dtp.gradient();
                let (u1x, u1z, u3x, u3z) = (u.u1.dx(), u.u1.dz(), u.u3.dx(), u.u3.dz());
                let n = p.values().len();
                let (mut a, mut b) = (vec![0.0; n], vec![0.0; n]);
                for m in 0..n {
                    let (gx, gz, r, d) = (px.values()[m], pz.values()[m], rho.values()[m], div.values()[m]);
                    // ((∇u)ᵀ∇p)_i = ∂_i u_j ∂_j p
                    let cx = u1x.values()[m] * gx + u3x.values()[m] * gz;
                    let cz = u1z.values()[m] * gx + u3z.values()[m] * gz;
                    a[m] = -(qx.values()[m] - cx) / r - gx * d / r;
                    b[m] = -(qz.values()[m] - cz) / r - gz * d / r;
                }
                out.dt2u = Some(Velocity { u1: p.with_values(a), u3: p.with_values(b) });
            }
            out.dtp = Some(dtp);
        }
    }
    Ok(out)
}
