use serde::{Deserialize, Serialize};

use crate::elliptic::Velocity;
use crate::geometry::StripField;

/// Inputs for the transport residuals of one phase; `omega_t` and `s_t` are
/// Eulerian time derivatives.
pub struct TransportInput<'a> {
    pub u: &'a Velocity,
    pub omega_t: &'a StripField,
    pub rho: &'a StripField,
    pub p: &'a StripField,
    pub entropy: Option<(&'a StripField, &'a StripField)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportResidual {
    /// `‖D_t ω + ω ∇·u - (∂_1ρ ∂_3p - ∂_3ρ ∂_1p)/ρ²‖_{L²}`.
    pub vorticity: f64,
    /// `‖(∂_1ρ ∂_3p - ∂_3ρ ∂_1p)/ρ²‖_{L²}`, the baroclinic source.
    pub baroclinic: f64,
    /// `‖D_t S‖_{L²}`.
    pub entropy: Option<f64>,
}

/// Planar vorticity `ω = ∂_1u_3 - ∂_3u_1`: stretching vanishes and the
/// transport law reads `D_tω = -ω∇·u - ∇(1/ρ)×∇p`.
pub fn transport_diagnostics(input: &TransportInput<'_>) -> TransportResidual {
    let u = input.u;
    let omega = u.curl();
    let [wx, wz] = omega.gradient();
    let div = u.divergence();
    let [rx, rz] = input.rho.gradient();
    let [px, pz] = input.p.gradient();
    let n = omega.values().len();
    let mut res = vec![0.0; n];
    let mut bar = vec![0.0; n];
    for m in 0..n {
        let r = input.rho.values()[m];
        let b = (rx.values()[m] * pz.values()[m] - rz.values()[m] * px.values()[m]) / (r * r);
        let dt = input.omega_t.values()[m] + u.u1.values()[m] * wx.values()[m] + u.u3.values()[m] * wz.values()[m];
        res[m] = dt + omega.values()[m] * div.values()[m] - b;
        bar[m] = b;
    }
    let entropy = input.entropy.map(|(s, st)| {
        let [sx, sz] = s.gradient();
        let v = (0..n)
            .map(|m| st.values()[m] + u.u1.values()[m] * sx.values()[m] + u.u3.values()[m] * sz.values()[m])
            .collect();
        s.with_values(v).l2_norm()
    });
    TransportResidual {
        vorticity: omega.with_values(res).l2_norm(),
        baroclinic: omega.with_values(bar).l2_norm(),
        entropy,
    }
}
