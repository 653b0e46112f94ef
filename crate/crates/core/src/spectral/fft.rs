use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// Unnormalized forward transform of every contiguous chunk of length `n`.
pub(crate) fn fft_in_place(data: &mut [Complex64], n: usize) {
    let plan = planner().lock().expect("fft planner poisoned").plan_fft_forward(n);
    plan.process(data);
}

/// Unnormalized inverse transform of every contiguous chunk of length `n`.
pub(crate) fn ifft_in_place(data: &mut [Complex64], n: usize) {
    let plan = planner().lock().expect("fft planner poisoned").plan_fft_inverse(n);
    plan.process(data);
}

/// Spectral x-derivatives of real data stored as contiguous rows of length
/// `nx`: returns `(d/dx, d^2/dx^2)`. The Nyquist mode is dropped from the
/// first derivative only.
pub(crate) fn row_derivatives(data: &[f64], nx: usize) -> (Vec<f64>, Vec<f64>) {
    let mut hat: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut hat, nx);
    let scale = 1.0 / nx as f64;
    let mut d1 = hat.clone();
    for (idx, (a, b)) in d1.iter_mut().zip(hat.iter_mut()).enumerate() {
        let i = idx % nx;
        let k = wavenumber(i, nx);
        *a *= if 2 * i == nx { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, k * scale) };
        *b *= -k * k * scale;
    }
    ifft_in_place(&mut d1, nx);
    ifft_in_place(&mut hat, nx);
    (d1.iter().map(|c| c.re).collect(), hat.iter().map(|c| c.re).collect())
}

/// First spectral x-derivative of real rows.
pub(crate) fn row_derivative(data: &[f64], nx: usize) -> Vec<f64> {
    let mut hat: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(&mut hat, nx);
    let scale = 1.0 / nx as f64;
    for (idx, a) in hat.iter_mut().enumerate() {
        let i = idx % nx;
        *a *= if 2 * i == nx {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, wavenumber(i, nx) * scale)
        };
    }
    ifft_in_place(&mut hat, nx);
    hat.iter().map(|c| c.re).collect()
}

/// Signed wavenumber of FFT index `i` (Nyquist maps to `-n/2`).
pub(crate) fn wavenumber(i: usize, n: usize) -> f64 {
    if i < n / 2 {
        i as f64
    } else {
        i as f64 - n as f64
    }
}
