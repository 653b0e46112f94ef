//! Fourier analysis on the periodic torus `T^d` (`d` = 1 or 2, period `2*pi`
//! per axis): transforms, Sobolev norms, Littlewood-Paley blocks, Bony
//! paraproducts and paradifferential quantization of symbols.
//!
//! Coefficients are normalized so that a single mode `exp(i k.x)` has
//! coefficient 1; all `L^2`-type quantities below use the same convention,
//! i.e. they are averages over the torus rather than integrals.

mod cutoff;
mod fft;
mod field;
mod littlewood;
mod paradiff;

pub use cutoff::{smoothstep7, CutoffFamily};
pub use field::{Grid, PeriodicField};
pub use littlewood::{bony_decompose, lowpass, lp_block, paraproduct, sobolev_norm, BonyParts};
pub use paradiff::{
    check_homogeneity, paradiff_apply, paradiff_multiplier, FourierMultiplierSymbol, Symbol,
    SymbolSampler,
};

pub(crate) use fft::{fft_in_place, ifft_in_place, row_derivative, row_derivatives, wavenumber};
