use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::acceleration::{interface_acceleration, AccelerationTerms};
use super::reference::{ReferenceIntegrator, SimState};
use crate::dn::LambdaSymbol;
use crate::error::{Error, Result};
use crate::spectral::{paradiff_apply, Grid, PeriodicField, Symbol};
use crate::state::TwoPhaseState;

fn field(grid: &Grid, v: Vec<f64>) -> PeriodicField {
    PeriodicField::from_real(grid.clone(), v).expect("interface grid")
}

fn dx(grid: &Grid, v: &[f64]) -> Vec<f64> {
    field(grid, v.to_vec()).derivative(0).real_samples()
}

fn upsilon(grid: &Grid, v: &[f64], s: f64) -> Vec<f64> {
    field(grid, v.to_vec()).bessel(s).real_samples()
}

/// `∫_T u v`.
fn integral(u: &[f64], v: &[f64]) -> f64 {
    2.0 * std::f64::consts::PI * u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / u.len() as f64
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x * y).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Real matrix of a paradifferential operator on the sample grid.
fn operator_matrix(sym: &dyn Symbol, grid: &Grid) -> Result<DMatrix<f64>> {
    let n = grid.len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let col = paradiff_apply(sym, &field(grid, e))?.real_samples();
        for i in 0..n {
            m[(i, j)] = col[i];
        }
    }
    Ok(m)
}

fn apply(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (m * nalgebra::DVector::from_column_slice(v)).iter().cloned().collect()
}

/// Per-time-level quantities of the interface energy
/// `E_F = ½ ∫ (|D_t F|² + 𝔞 |T_{√λ} F|²)`, `F = Υ^{κ-3/2} ∂̄_1 f`, where
/// `D_t = ∂_t + ū ∂_1` with `ū` the mean of the two tangential traces.
#[derive(Clone, Debug)]
pub struct BudgetFrame {
    pub time: f64,
    pub kappa: usize,
    grid: Grid,
    g: Vec<f64>,
    gt: Vec<f64>,
    ubar: Vec<f64>,
    a: Vec<f64>,
    f_hi: Vec<f64>,
    dt_f: Vec<f64>,
    t_f: Vec<f64>,
    t_sqrt: DMatrix<f64>,
    t_lambda: DMatrix<f64>,
    pub acceleration: AccelerationTerms,
    pub energy: f64,
}

impl BudgetFrame {
    pub fn new(integ: &ReferenceIntegrator, s: &SimState, kappa: usize) -> Result<Self> {
        let flow = integ.flow(s)?;
        let st: TwoPhaseState = integ.incompressible_state(s, &flow)?.into();
        Self::from_state(&st, s.time, kappa)
    }

    pub fn from_state(st: &TwoPhaseState, time: f64, kappa: usize) -> Result<Self> {
        let iface = st.interface();
        let grid = iface.grid().clone();
        let sexp = kappa as f64 - 1.5;
        let g = iface.f.derivative(0).real_samples();
        let gt = iface.ft.derivative(0).real_samples();
        let (u0, u1) = (st.velocity(0).u1.interface_trace(), st.velocity(1).u1.interface_trace());
        let ubar: Vec<f64> = u0.iter().zip(&u1).map(|(a, b)| 0.5 * (a + b)).collect();
        let acceleration = interface_acceleration(st, 0)?;
        let a = acceleration.taylor.a.clone();
        let f_hi = upsilon(&grid, &g, sexp);
        let fx = dx(&grid, &f_hi);
        let dt_f: Vec<f64> = upsilon(&grid, &gt, sexp).iter().zip(mul(&ubar, &fx)).map(|(x, y)| x + y).collect();
        let t_sqrt = operator_matrix(&LambdaSymbol::power(iface, 0.5), &grid)?;
        let t_lambda = operator_matrix(&LambdaSymbol::new(iface), &grid)?;
        let t_f = apply(&t_sqrt, &f_hi);
        let energy = 0.5 * (integral(&dt_f, &dt_f) + integral(&mul(&a, &t_f), &t_f));
        Ok(BudgetFrame { time, kappa, grid, g, gt, ubar, a, f_hi, dt_f, t_f, t_sqrt, t_lambda, acceleration, energy })
    }

    pub fn min_taylor(&self) -> f64 {
        self.a.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub time: f64,
    pub e_f: f64,
    /// Centered difference of `E_F`.
    pub de_dt: f64,
    /// `I_1 … I_6`.
    pub terms: [f64; 6],
    /// `|dE_F/dt - Σ I_j|`.
    pub closure_defect: f64,
    /// Closure defect over `max_j |I_j|`.
    pub relative_defect: f64,
}

/// Budget `dE_F/dt = I_1 + … + I_6` at the middle of three frames spaced by `dt`.
pub fn interface_energy_budget(frames: [&BudgetFrame; 3], dt: f64) -> Result<BudgetRecord> {
    let [prev, cur, next] = frames;
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("frame spacing {dt}")));
    }
    let min_a = cur.min_taylor();
    if !(min_a > 0.0) {
        return Err(Error::HyperbolicityLoss { min_taylor: min_a });
    }
    let grid = &cur.grid;
    let s = cur.kappa as f64 - 1.5;
    let n = cur.g.len();
    let ddt = |p: &[f64], q: &[f64]| -> Vec<f64> { (0..n).map(|i| (q[i] - p[i]) / (2.0 * dt)).collect() };
    let ub = &cur.ubar;
    let ubx = dx(grid, ub);
    let a_x = dx(grid, &cur.a);
    let dt_a: Vec<f64> = ddt(&prev.a, &next.a).iter().enumerate().map(|(i, v)| v + ub[i] * a_x[i]).collect();
    let dtf2 = mul(&cur.dt_f, &cur.dt_f);
    let tf2 = mul(&cur.t_f, &cur.t_f);
    let coef: Vec<f64> = (0..n).map(|i| ubx[i] * cur.a[i] + dt_a[i]).collect();
    let i1 = 0.5 * (integral(&ubx, &dtf2) + integral(&coef, &tf2));

    // I_2: 𝔞 (T*T - T_λ) F · D_t F
    let tstar_t = cur.t_sqrt.transpose() * &cur.t_sqrt;
    let diff = sub(&apply(&tstar_t, &cur.f_hi), &apply(&cur.t_lambda, &cur.f_hi));
    let i2 = integral(&mul(&cur.a, &diff), &cur.dt_f);

    // I_3: [𝔞 D_t, T_{√λ}] F · T_{√λ} F
    let tfx = dx(grid, &cur.t_f);
    let dt_tf: Vec<f64> = ddt(&prev.t_f, &next.t_f).iter().enumerate().map(|(i, v)| v + ub[i] * tfx[i]).collect();
    let comm3 = sub(&mul(&cur.a, &dt_tf), &apply(&cur.t_sqrt, &mul(&cur.a, &cur.dt_f)));
    let i3 = integral(&comm3, &cur.t_f);

    // I_4: -[Υ, D_t²] ∂̄f · D_t F with D_t² = ∂_t² + 2ū∂_t∂_1 + ū²∂_1² + (D_t ū)∂_1
    let dt_u: Vec<f64> = ddt(&prev.ubar, &next.ubar).iter().enumerate().map(|(i, v)| v + ub[i] * ubx[i]).collect();
    let comm = |c: &[f64], v: &[f64], order: usize| -> Vec<f64> {
        let mut d = v.to_vec();
        for _ in 0..order {
            d = dx(grid, &d);
        }
        let mut e = upsilon(grid, v, s);
        for _ in 0..order {
            e = dx(grid, &e);
        }
        sub(&upsilon(grid, &mul(c, &d), s), &mul(c, &e))
    };
    let two_u: Vec<f64> = ub.iter().map(|v| 2.0 * v).collect();
    let u2 = mul(ub, ub);
    let (ca, cb, cc) = (comm(&two_u, &cur.gt, 1), comm(&u2, &cur.g, 2), comm(&dt_u, &cur.g, 1));
    let c4: Vec<f64> = (0..n).map(|i| ca[i] + cb[i] + cc[i]).collect();
    let i4 = -integral(&c4, &cur.dt_f);

    // I_5: -[Υ, 𝔞 T_λ] ∂̄f · D_t F
    let atl = mul(&cur.a, &apply(&cur.t_lambda, &cur.g));
    let c5 = sub(&upsilon(grid, &atl, s), &mul(&cur.a, &apply(&cur.t_lambda, &cur.f_hi)));
    let i5 = -integral(&c5, &cur.dt_f);

    // I_6: Υ(𝒩⁺ + 𝒩⁻) · D_t F
    let nsum: Vec<f64> = (0..n).map(|i| cur.acceleration.lower[0][i] + cur.acceleration.lower[1][i]).collect();
    let i6 = integral(&upsilon(grid, &nsum, s), &cur.dt_f);

    let terms = [i1, i2, i3, i4, i5, i6];
    let de_dt = (next.energy - prev.energy) / (2.0 * dt);
    let closure_defect = (de_dt - terms.iter().sum::<f64>()).abs();
    let scale = terms.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let relative_defect = if scale > 0.0 { closure_defect / scale } else { closure_defect };
    Ok(BudgetRecord { time: cur.time, e_f: cur.energy, de_dt, terms, closure_defect, relative_defect })
}
