use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{fft_in_place, ifft_in_place};
use crate::error::{Error, Result};

/// Uniform grid on `T^d` with power-of-two sizes per axis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    shape: Vec<usize>,
}

impl Grid {
    pub fn new(shape: &[usize]) -> Result<Self> {
        if shape.is_empty() || shape.len() > 2 {
            return Err(Error::UnsupportedDimension(shape.len()));
        }
        for &n in shape {
            if n < 2 || !n.is_power_of_two() {
                return Err(Error::Shape(format!("grid size {n} is not a power of two >= 2")));
            }
        }
        Ok(Grid { shape: shape.to_vec() })
    }

    pub fn line(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn plane(n0: usize, n1: usize) -> Result<Self> {
        Self::new(&[n0, n1])
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of points along `axis`.
    pub fn n(&self, axis: usize) -> usize {
        self.shape[axis]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * PI / self.shape[axis] as f64
    }

    fn split(&self, flat: usize) -> (usize, usize) {
        match self.shape.len() {
            1 => (flat, 0),
            _ => (flat / self.shape[1], flat % self.shape[1]),
        }
    }

    /// Physical coordinates of grid point `flat` (second entry is 0 for d = 1).
    pub fn coordinate(&self, flat: usize) -> [f64; 2] {
        let (i0, i1) = self.split(flat);
        match self.shape.len() {
            1 => [self.spacing(0) * i0 as f64, 0.0],
            _ => [self.spacing(0) * i0 as f64, self.spacing(1) * i1 as f64],
        }
    }

    /// Signed integer wavenumber of FFT index `i` on an axis with `n` points.
    /// The Nyquist index maps to `-n/2`.
    pub fn axis_frequency(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    /// Wavevector of spectral index `flat` (second entry is 0 for d = 1).
    pub fn frequency(&self, flat: usize) -> [f64; 2] {
        let (i0, i1) = self.split(flat);
        match self.shape.len() {
            1 => [Self::axis_frequency(i0, self.shape[0]) as f64, 0.0],
            _ => [
                Self::axis_frequency(i0, self.shape[0]) as f64,
                Self::axis_frequency(i1, self.shape[1]) as f64,
            ],
        }
    }

    pub fn is_nyquist(&self, flat: usize, axis: usize) -> bool {
        let (i0, i1) = self.split(flat);
        let i = if axis == 0 { i0 } else { i1 };
        self.shape[axis] >= 2 && i == self.shape[axis] / 2
    }

    pub fn frequency_norm(&self, flat: usize) -> f64 {
        let k = self.frequency(flat);
        (k[0] * k[0] + k[1] * k[1]).sqrt()
    }

    pub fn max_frequency_norm(&self) -> f64 {
        self.shape
            .iter()
            .map(|&n| (n as f64 / 2.0).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Spectral index of the integer wavevector `k`, if it is representable.
    pub fn index_of(&self, k: [i64; 2]) -> Option<usize> {
        let wrap = |k: i64, n: usize| -> Option<usize> {
            let half = n as i64 / 2;
            if k < -half || k >= half {
                None
            } else {
                Some(k.rem_euclid(n as i64) as usize)
            }
        };
        match self.shape.len() {
            1 => {
                if k[1] != 0 {
                    return None;
                }
                wrap(k[0], self.shape[0])
            }
            _ => Some(wrap(k[0], self.shape[0])? * self.shape[1] + wrap(k[1], self.shape[1])?),
        }
    }
}

/// Complex samples of a function on `T^d` with lazily cached Fourier
/// coefficients `c_k = mean(u * exp(-i k.x))`.
pub struct PeriodicField {
    grid: Grid,
    samples: Vec<Complex64>,
    coeffs: OnceLock<Vec<Complex64>>,
}

impl Clone for PeriodicField {
    fn clone(&self) -> Self {
        PeriodicField {
            grid: self.grid.clone(),
            samples: self.samples.clone(),
            coeffs: self.coeffs.clone(),
        }
    }
}

impl fmt::Debug for PeriodicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicField")
            .field("shape", &self.grid.shape)
            .field("max_abs", &self.max_abs())
            .finish()
    }
}

fn forward(grid: &Grid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform(grid, &mut data, true);
    let scale = 1.0 / grid.len() as f64;
    for c in data.iter_mut() {
        *c *= scale;
    }
    data
}

fn inverse(grid: &Grid, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut data = coeffs.to_vec();
    transform(grid, &mut data, false);
    data
}

fn transform(grid: &Grid, data: &mut [Complex64], fwd: bool) {
    let run = |buf: &mut [Complex64], n: usize| {
        if fwd {
            fft_in_place(buf, n)
        } else {
            ifft_in_place(buf, n)
        }
    };
    match grid.shape.len() {
        1 => run(data, grid.shape[0]),
        _ => {
            let (n0, n1) = (grid.shape[0], grid.shape[1]);
            run(data, n1);
            let mut col = vec![Complex64::new(0.0, 0.0); n0];
            for j in 0..n1 {
                for i in 0..n0 {
                    col[i] = data[i * n1 + j];
                }
                run(&mut col, n0);
                for i in 0..n0 {
                    data[i * n1 + j] = col[i];
                }
            }
        }
    }
}

impl PeriodicField {
    pub fn from_samples(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        Ok(PeriodicField { grid, samples, coeffs: OnceLock::new() })
    }

    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::from_samples(grid, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: &Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let samples = (0..grid.len()).map(|i| Complex64::new(f(grid.coordinate(i)), 0.0)).collect();
        PeriodicField { grid: grid.clone(), samples, coeffs: OnceLock::new() }
    }

    pub fn from_complex_fn(grid: &Grid, f: impl Fn([f64; 2]) -> Complex64) -> Self {
        let samples = (0..grid.len()).map(|i| f(grid.coordinate(i))).collect();
        PeriodicField { grid: grid.clone(), samples, coeffs: OnceLock::new() }
    }

    pub fn from_coefficients(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} coefficients for a grid of {} points",
                coeffs.len(),
                grid.len()
            )));
        }
        let samples = inverse(&grid, &coeffs);
        let cell = OnceLock::new();
        let _ = cell.set(coeffs);
        Ok(PeriodicField { grid, samples, coeffs: cell })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        PeriodicField {
            grid: grid.clone(),
            samples: vec![Complex64::new(c, 0.0); grid.len()],
            coeffs: OnceLock::new(),
        }
    }

    /// The Fourier mode `exp(i k.x)`.
    pub fn mode(grid: &Grid, k: [i64; 2]) -> Self {
        Self::from_complex_fn(grid, |x| {
            Complex64::from_polar(1.0, k[0] as f64 * x[0] + k[1] as f64 * x[1])
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn real_samples(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.re).collect()
    }

    pub fn coefficients(&self) -> &[Complex64] {
        self.coeffs.get_or_init(|| forward(&self.grid, &self.samples))
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.im.abs()))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Real part as a new field.
    pub fn re(&self) -> Self {
        PeriodicField::from_real(self.grid.clone(), self.real_samples()).expect("same grid")
    }

    /// Imaginary part as a new real field.
    pub fn im(&self) -> Self {
        PeriodicField::from_real(self.grid.clone(), self.samples.iter().map(|c| c.im).collect())
            .expect("same grid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidField("non-finite samples".into()));
        }
        Ok(())
    }

    pub fn check_same_grid(&self, other: &PeriodicField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(format!(
                "grids {:?} and {:?} differ",
                self.grid.shape, other.grid.shape
            )));
        }
        Ok(())
    }

    /// Applies `m(k, c_k)` to every coefficient.
    pub fn map_coefficients(&self, mut m: impl FnMut([f64; 2], usize, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .coefficients()
            .iter()
            .enumerate()
            .map(|(i, &c)| m(self.grid.frequency(i), i, c))
            .collect();
        PeriodicField::from_coefficients(self.grid.clone(), coeffs).expect("same grid")
    }

    /// Real Fourier multiplier `m(k)`.
    pub fn multiplier(&self, m: impl Fn([f64; 2]) -> f64) -> Self {
        self.map_coefficients(|k, _, c| c * m(k))
    }

    /// Spectral derivative along `axis`; the Nyquist mode is dropped so real
    /// fields stay real.
    pub fn derivative(&self, axis: usize) -> Self {
        let grid = self.grid.clone();
        self.map_coefficients(|k, i, c| {
            if grid.is_nyquist(i, axis) {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::new(0.0, k[axis])
            }
        })
    }

    /// Fractional Bessel potential `<D>^s = (1 - Laplacian)^{s/2}`.
    pub fn bessel(&self, s: f64) -> Self {
        self.multiplier(|k| (1.0 + k[0] * k[0] + k[1] * k[1]).powf(s / 2.0))
    }

    /// Zeroes every coefficient with `|k_axis| > n_axis / 3`.
    pub fn dealias(&self) -> Self {
        let grid = self.grid.clone();
        self.map_coefficients(|k, _, c| {
            let keep = (0..grid.dim()).all(|a| k[a].abs() <= (grid.n(a) / 3) as f64);
            if keep {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Raw collocation product (aliased).
    pub fn pointwise(&self, other: &PeriodicField) -> Self {
        assert_eq!(self.grid, other.grid, "pointwise product on different grids");
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a * b).collect();
        PeriodicField { grid: self.grid.clone(), samples, coeffs: OnceLock::new() }
    }

    /// Dealiased product: both factors and the result are truncated by the
    /// 2/3 rule, so the retained band carries no aliasing error.
    pub fn product(&self, other: &PeriodicField) -> Self {
        self.dealias().pointwise(&other.dealias()).dealias()
    }

    pub fn map_samples(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        let samples = self.samples.iter().map(|&c| f(c)).collect();
        PeriodicField { grid: self.grid.clone(), samples, coeffs: OnceLock::new() }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_samples(|c| c * s)
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        self.map_samples(|c| c * s)
    }

    /// `sum_k c_k(u) conj(c_k(v))`, i.e. the torus average of `u * conj(v)`.
    pub fn inner(&self, other: &PeriodicField) -> Complex64 {
        assert_eq!(self.grid, other.grid, "inner product on different grids");
        let n = self.samples.len() as f64;
        self.samples.iter().zip(&other.samples).map(|(a, b)| a * b.conj()).sum::<Complex64>() / n
    }

    pub fn l2_norm(&self) -> f64 {
        let n = self.samples.len() as f64;
        (self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / n).sqrt()
    }

    pub fn mean(&self) -> Complex64 {
        self.coefficients()[0]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn min_re(&self) -> f64 {
        self.samples.iter().fold(f64::INFINITY, |m, c| m.min(c.re))
    }

    pub fn max_re(&self) -> f64 {
        self.samples.iter().fold(f64::NEG_INFINITY, |m, c| m.max(c.re))
    }

    /// Maximum sample distance to `other`.
    pub fn max_diff(&self, other: &PeriodicField) -> f64 {
        assert_eq!(self.grid, other.grid);
        self.samples.iter().zip(&other.samples).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Trigonometric interpolation at an arbitrary point.
    pub fn evaluate(&self, x: [f64; 2]) -> Complex64 {
        let coeffs = self.coefficients();
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let k = self.grid.frequency(i);
                let w = if self.grid.is_nyquist(i, 0) || (self.grid.dim() == 2 && self.grid.is_nyquist(i, 1)) {
                    // symmetric treatment of the Nyquist mode
                    Complex64::new((k[0] * x[0] + k[1] * x[1]).cos(), 0.0)
                } else {
                    Complex64::from_polar(1.0, k[0] * x[0] + k[1] * x[1])
                };
                c * w
            })
            .sum()
    }
}

impl Add for &PeriodicField {
    type Output = PeriodicField;
    fn add(self, rhs: &PeriodicField) -> PeriodicField {
        assert_eq!(self.grid, rhs.grid, "sum of fields on different grids");
        let samples = self.samples.iter().zip(&rhs.samples).map(|(a, b)| a + b).collect();
        PeriodicField { grid: self.grid.clone(), samples, coeffs: OnceLock::new() }
    }
}

impl Sub for &PeriodicField {
    type Output = PeriodicField;
    fn sub(self, rhs: &PeriodicField) -> PeriodicField {
        assert_eq!(self.grid, rhs.grid, "difference of fields on different grids");
        let samples = self.samples.iter().zip(&rhs.samples).map(|(a, b)| a - b).collect();
        PeriodicField { grid: self.grid.clone(), samples, coeffs: OnceLock::new() }
    }
}

impl Neg for &PeriodicField {
    type Output = PeriodicField;
    fn neg(self) -> PeriodicField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &PeriodicField {
    type Output = PeriodicField;
    fn mul(self, rhs: f64) -> PeriodicField {
        self.scale(rhs)
    }
}
