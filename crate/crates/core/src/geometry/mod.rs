//! Interface graphs, their frames, harmonic coordinates of the two phase
//! domains, harmonic extensions and the tangential derivatives `∂̄`.
//!
//! Strip-based operators are implemented for one horizontal dimension;
//! interfaces and frames support `d = 2` as well.

mod extension;
mod interface;
mod strip;

pub use extension::{harmonic_extension, harmonic_extension_on, tangential_derivative, tangential_time_derivative};
pub use interface::{frame, modal_height, Frame, InterfaceMode, InterfaceState};
pub use strip::{HarmonicMap, Side, StripField, StripGrid, BIJECTIVITY_THRESHOLD};

