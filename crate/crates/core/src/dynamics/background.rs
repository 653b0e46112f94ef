use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Side;
use crate::spectral::{Grid, PeriodicField};
use crate::state::{
    classify_discontinuity, hydrostatic_state, taylor_sign, tangential_pressure_check, IncompressibleState, Tolerances,
    TwoPhaseState,
};

/// Two resting layers of densities `rho = [ρ⁻, ρ⁺]` separated by the flat
/// interface `z = c`, under the downward body force `g` (hydrostatic pressure
/// `p^± = -ρ^± g (z - c)`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatBackground {
    pub rho: [f64; 2],
    pub g: f64,
    pub c: f64,
}

impl FlatBackground {
    pub fn new(rho: [f64; 2], g: f64, c: f64) -> Result<Self> {
        if !(rho[0] > 0.0 && rho[1] > 0.0) {
            return Err(Error::State(format!("densities {rho:?} must be positive")));
        }
        if !(c.abs() < 1.0) || !g.is_finite() {
            return Err(Error::Domain(format!("background needs |c| < 1 and finite g, got c = {c}, g = {g}")));
        }
        Ok(FlatBackground { rho, g, c })
    }

    /// Constant Taylor sign `𝔞 = g(ρ⁻ - ρ⁺)/(ρ⁺ + ρ⁻)`.
    pub fn taylor(&self) -> f64 {
        self.g * (self.rho[0] - self.rho[1]) / (self.rho[0] + self.rho[1])
    }

    pub fn thickness(&self, side: Side) -> f64 {
        side.thickness(self.c)
    }

    pub fn min_thickness(&self) -> f64 {
        self.thickness(Side::Minus).min(self.thickness(Side::Plus))
    }

    pub fn state(&self, nx: usize, ny: usize) -> Result<IncompressibleState> {
        let grid = Grid::line(nx)?;
        hydrostatic_state(&PeriodicField::constant(&grid, self.c), self.c, ny, self.rho, self.g, 0.0, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dispersion {
    pub k: f64,
    pub omega2_exact: f64,
    pub omega2_principal: f64,
    pub growth_rate: f64,
}

/// Two-layer linear dispersion relation with rigid walls and its principal
/// part `𝔞 |k|`.
pub fn linear_dispersion(bg: &FlatBackground, k: f64) -> Result<Dispersion> {
    let k = k.abs();
    if k == 0.0 {
        return Err(Error::Domain("k = 0 is the neutral translation mode".into()));
    }
    if !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber {k}")));
    }
    let [rm, rp] = bg.rho;
    let coth = |x: f64| 1.0 / x.tanh();
    let hm = bg.thickness(Side::Minus);
    let hp = bg.thickness(Side::Plus);
    let omega2_exact = bg.g * k * (rm - rp) / (rm * coth(k * hm) + rp * coth(k * hp));
    let omega2_principal = bg.taylor() * k;
    let growth_rate = if omega2_exact < 0.0 { (-omega2_exact).sqrt() } else { 0.0 };
    Ok(Dispersion { k, omega2_exact, omega2_principal, growth_rate })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityClass {
    Neutral,
    /// `0 <= min 𝔞 < c₀`: hyperbolic but without the required margin.
    Marginal,
    RtUnstable,
    KhDegenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub class: StabilityClass,
    pub min_taylor: f64,
    /// `min 𝔞 - c₀`.
    pub margin: f64,
    pub tangential_residual: f64,
}

/// Classifies a state from its Taylor sign and tangential pressure residual.
pub fn stability_classify(state: &TwoPhaseState, c0: f64, tol: Tolerances) -> StabilityReport {
    let t = taylor_sign(state);
    let tang = tangential_pressure_check(state, tol);
    let rho_jump = classify_discontinuity(state, tol).jump_rho > tol.zero;
    let class = if t.min < 0.0 {
        StabilityClass::RtUnstable
    } else if tang.residual > tol.zero && rho_jump {
        StabilityClass::KhDegenerate
    } else if t.min >= c0 {
        StabilityClass::Neutral
    } else {
        StabilityClass::Marginal
    };
    StabilityReport { class, min_taylor: t.min, margin: t.min - c0, tangential_residual: tang.residual }
}

pub fn stability_classify_background(bg: &FlatBackground, c0: f64) -> StabilityReport {
    let a = bg.taylor();
    let class = if a < 0.0 {
        StabilityClass::RtUnstable
    } else if a >= c0 {
        StabilityClass::Neutral
    } else {
        StabilityClass::Marginal
    };
    StabilityReport { class, min_taylor: a, margin: a - c0, tangential_residual: 0.0 }
}
