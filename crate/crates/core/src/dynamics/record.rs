use serde::{Deserialize, Serialize};

use super::background::{stability_classify, StabilityClass};
use super::budget::BudgetRecord;
use super::reference::{Flow, ReferenceIntegrator, SimState};
use crate::error::Result;
use crate::state::{classify_discontinuity, energy_norm, Discontinuity, Tolerances, TwoPhaseState};

/// One row of a simulation's time series.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimRecord {
    pub time: f64,
    pub step: u64,
    pub energy_e: f64,
    pub energy_f: f64,
    /// `‖f‖_{H^κ}`.
    pub interface_norm: f64,
    pub min_taylor: f64,
    /// `|f̂_k|` for `k = 1..`.
    pub mode_amplitudes: Vec<f64>,
    pub kinetic_energy: f64,
    pub potential_energy: f64,
    pub lower_area: f64,
    pub flux_mismatch: f64,
    pub stability: StabilityClass,
    pub discontinuity: Discontinuity,
    pub budget: Option<BudgetRecord>,
}

/// Monitors of a simulation state.
pub struct RecordOptions {
    pub kappa: usize,
    pub modes: usize,
    pub c0: f64,
    pub tolerances: Tolerances,
}

pub fn sim_record(
    integ: &ReferenceIntegrator,
    s: &SimState,
    flow: &Flow,
    opts: &RecordOptions,
) -> Result<(SimRecord, TwoPhaseState)> {
    let state: TwoPhaseState = integ.incompressible_state(s, flow)?.into();
    let energy = energy_norm(&state, opts.kappa, 0)?;
    let stab = stability_classify(&state, opts.c0, opts.tolerances);
    let disc = classify_discontinuity(&state, opts.tolerances);
    let coeffs = s.f.coefficients();
    let g = s.f.grid();
    let mode_amplitudes = (1..=opts.modes as i64)
        .map(|k| g.index_of([k, 0]).map(|i| 2.0 * coeffs[i].norm()).unwrap_or(0.0))
        .collect();
    let record = SimRecord {
        time: s.time,
        step: s.step,
        energy_e: energy.e_total,
        energy_f: energy.f_total,
        interface_norm: energy.e_entry("f").unwrap_or(0.0),
        min_taylor: stab.min_taylor,
        mode_amplitudes,
        kinetic_energy: integ.kinetic_energy(flow),
        potential_energy: integ.potential_energy(s),
        lower_area: ReferenceIntegrator::lower_area(s),
        flux_mismatch: flow.flux_mismatch,
        stability: stab.class,
        discontinuity: disc.class,
        budget: None,
    };
    Ok((record, state))
}
