use serde::{Deserialize, Serialize};

use crate::elliptic::Velocity;
use crate::error::Result;
use crate::geometry::{HarmonicMap, InterfaceState, Side, StripField};
use crate::spectral::PeriodicField;

use super::eos::eos_entropy;
use super::types::{CompressibleState, IncompressibleState};

/// Parameters of a constructed entropy wave: a parallel shear flow
/// `u = (U_0 + U_1 z, 0)` over a translating interface, pressure
/// `p^± = q - ρ^± g (z - f)` and entropies chosen so `ρ^±` are the given constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyWaveSpec {
    pub a: f64,
    pub gamma: f64,
    pub q: f64,
    /// `[ρ⁻, ρ⁺]`.
    pub rho: [f64; 2],
    pub shear: [f64; 2],
    pub g: f64,
}

impl Default for EntropyWaveSpec {
    fn default() -> Self {
        EntropyWaveSpec { a: 1.0, gamma: 1.4, q: 10.0, rho: [2.0, 1.0], shear: [0.0, 0.0], g: 1.0 }
    }
}

/// Interface moving with the shear flow: `∂_t f = -U(f) ∂_1 f`.
fn advected_interface(f: &PeriodicField, f_star: f64, shear: [f64; 2]) -> Result<InterfaceState> {
    let fx = f.derivative(0).real_samples();
    let fv = f.real_samples();
    let ft: Vec<f64> = fv.iter().zip(&fx).map(|(h, d)| -(shear[0] + shear[1] * h) * d).collect();
    InterfaceState::new(f.clone(), PeriodicField::from_real(f.grid().clone(), ft)?, f_star)
}

fn maps(iface: &InterfaceState, ny: usize) -> Result<[std::sync::Arc<HarmonicMap>; 2]> {
    Ok([HarmonicMap::new(iface, Side::Minus, ny)?, HarmonicMap::new(iface, Side::Plus, ny)?])
}

pub fn entropy_wave_state(f: &PeriodicField, f_star: f64, ny: usize, spec: &EntropyWaveSpec) -> Result<CompressibleState> {
    let iface = advected_interface(f, f_star, spec.shear)?;
    let m = maps(&iface, ny)?;
    let fv = f.real_samples();
    let mut p = Vec::new();
    let mut u = Vec::new();
    let mut s = Vec::new();
    for k in 0..2 {
        let map = &m[k];
        let nx = map.nx();
        let r = spec.rho[k];
        let mut pv = vec![0.0; map.grid.len()];
        for j in 0..map.grid.rows() {
            for i in 0..nx {
                pv[j * nx + i] = spec.q - r * spec.g * (map.z(i, j) - fv[i]);
            }
        }
        let sv = pv.iter().map(|&pp| eos_entropy(pp, r, spec.a, spec.gamma)).collect::<Result<Vec<_>>>()?;
        p.push(StripField::new(map.clone(), pv)?);
        s.push(StripField::new(map.clone(), sv)?);
        u.push(Velocity {
            u1: StripField::from_fn(map, |_, z| spec.shear[0] + spec.shear[1] * z),
            u3: StripField::zeros(map),
        });
    }
    let [p0, p1]: [StripField; 2] = p.try_into().expect("two sides");
    let [u0, u1]: [Velocity; 2] = u.try_into().expect("two sides");
    let [s0, s1]: [StripField; 2] = s.try_into().expect("two sides");
    CompressibleState::new([p0, p1], [u0, u1], [s0, s1], spec.a, spec.gamma)
}

/// Incompressible hydrostatic state `u = (U, 0)`, `p^± = q - ρ^± g (z - f)`.
pub fn hydrostatic_state(
    f: &PeriodicField,
    f_star: f64,
    ny: usize,
    rho: [f64; 2],
    g: f64,
    q: f64,
    speed: f64,
) -> Result<IncompressibleState> {
    let iface = advected_interface(f, f_star, [speed, 0.0])?;
    let m = maps(&iface, ny)?;
    let fv = f.real_samples();
    let mk = |k: usize| -> Result<(StripField, Velocity)> {
        let map = &m[k];
        let nx = map.nx();
        let mut pv = vec![0.0; map.grid.len()];
        for j in 0..map.grid.rows() {
            for i in 0..nx {
                pv[j * nx + i] = q - rho[k] * g * (map.z(i, j) - fv[i]);
            }
        }
        Ok((StripField::new(map.clone(), pv)?, Velocity { u1: StripField::constant(map, speed), u3: StripField::zeros(map) }))
    };
    let (p0, u0) = mk(0)?;
    let (p1, u1) = mk(1)?;
    IncompressibleState::new([u0, u1], [p0, p1], rho, g)
}
