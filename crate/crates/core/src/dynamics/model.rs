use serde::{Deserialize, Serialize};

use super::background::{linear_dispersion, FlatBackground};
use crate::dn::LambdaSymbol;
use crate::error::{Error, Result};
use crate::geometry::InterfaceState;
use crate::spectral::{paradiff_apply, CutoffFamily, PeriodicField};

/// Lower-order closure used by the model equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelClosure {
    /// `𝒩 = 0`: the principal equation `∂_t² f + 𝔞 T_λ f = 0`.
    Principal,
    /// `𝒩` frozen at its linearization about the background, a Fourier
    /// multiplier completing `𝔞 ψ(k)|k|` to the exact two-layer `ω²(k)`.
    Linearized,
}

#[derive(Clone, Debug)]
pub struct ModelState {
    pub f: PeriodicField,
    pub ft: PeriodicField,
    pub time: f64,
}

/// Model integrator for `(f, ∂_t f)`: `∂_t² f = -𝔞 T_{λ[f]}(f - c) + 𝒩`, RK4.
pub struct ModelIntegrator {
    pub background: FlatBackground,
    pub closure: ModelClosure,
}

impl ModelIntegrator {
    pub fn new(background: FlatBackground, closure: ModelClosure) -> Self {
        ModelIntegrator { background, closure }
    }

    /// Largest admissible `max |f - c|`.
    pub fn amplitude_limit(&self) -> f64 {
        0.1 * self.background.min_thickness()
    }

    fn guard(&self, f: &PeriodicField) -> Result<()> {
        let amp = f.real_samples().iter().fold(0.0f64, |m, h| m.max((h - self.background.c).abs()));
        if amp > self.amplitude_limit() {
            return Err(Error::AmplitudeGuard { amplitude: amp, limit: self.amplitude_limit() });
        }
        Ok(())
    }

    pub fn acceleration(&self, f: &PeriodicField) -> Result<PeriodicField> {
        let bg = &self.background;
        let eta = f - &PeriodicField::constant(f.grid(), bg.c);
        let iface = InterfaceState::new(f.clone(), PeriodicField::zeros(f.grid()), bg.c)?;
        let principal = paradiff_apply(&LambdaSymbol::new(&iface), &eta)?.scale(-bg.taylor());
        match self.closure {
            ModelClosure::Principal => Ok(principal),
            ModelClosure::Linearized => {
                let cut = CutoffFamily::default();
                let a = bg.taylor();
                let lower = eta.multiplier(|k| {
                    let kk = k[0].abs();
                    if kk == 0.0 {
                        return 0.0;
                    }
                    let w2 = linear_dispersion(bg, kk).map(|d| d.omega2_exact).unwrap_or(0.0);
                    -(w2 - a * cut.psi(kk) * kk)
                });
                Ok(&principal + &lower)
            }
        }
    }

    pub fn step(&self, s: &ModelState, dt: f64) -> Result<ModelState> {
        self.guard(&s.f)?;
        let rhs = |f: &PeriodicField, v: &PeriodicField| -> Result<(PeriodicField, PeriodicField)> {
            Ok((v.clone(), self.acceleration(f)?))
        };
        let (k1f, k1v) = rhs(&s.f, &s.ft)?;
        let (k2f, k2v) = rhs(&(&s.f + &(&k1f * (0.5 * dt))), &(&s.ft + &(&k1v * (0.5 * dt))))?;
        let (k3f, k3v) = rhs(&(&s.f + &(&k2f * (0.5 * dt))), &(&s.ft + &(&k2v * (0.5 * dt))))?;
        let (k4f, k4v) = rhs(&(&s.f + &(&k3f * dt)), &(&s.ft + &(&k3v * dt)))?;
        let comb = |y: &PeriodicField, a: &PeriodicField, b: &PeriodicField, c: &PeriodicField, d: &PeriodicField| {
            y + &(&(&(&(a + &(b * 2.0)) + &(c * 2.0)) + d) * (dt / 6.0))
        };
        let f = comb(&s.f, &k1f, &k2f, &k3f, &k4f).re();
        self.guard(&f)?;
        Ok(ModelState { f, ft: comb(&s.ft, &k1v, &k2v, &k3v, &k4v).re(), time: s.time + dt })
    }
}
