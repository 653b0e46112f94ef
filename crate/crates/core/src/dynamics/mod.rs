//! Interface evolution: the decomposition `D_t²∂̄f = -𝔞T_λ∂̄f + 𝒩⁺ + 𝒩⁻`, its
//! energy budget, linear stability of flat layers, a reference two-layer
//! integrator and a model integrator for the paralinearized equation.

mod acceleration;
mod background;
mod budget;
mod model;
mod record;
mod reference;
mod transport;

pub use acceleration::{interface_acceleration, tangential_pressure_field, AccelerationTerms};
pub use background::{
    linear_dispersion, stability_classify, stability_classify_background, Dispersion, FlatBackground, StabilityClass,
    StabilityReport,
};
pub use budget::{interface_energy_budget, BudgetFrame, BudgetRecord};
pub use model::{ModelClosure, ModelIntegrator, ModelState};
pub use record::{sim_record, RecordOptions, SimRecord};
pub use reference::{Flow, ReferenceIntegrator, SimParams, SimState};
pub use transport::{transport_diagnostics, TransportInput, TransportResidual};
