use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::cutoff::CutoffFamily;
use super::field::{Grid, PeriodicField};
use crate::error::{Error, Result};

/// A real symbol `a(x, xi)` of order `m`.
pub trait Symbol: Send + Sync {
    fn order(&self) -> f64;

    fn eval(&self, x: [f64; 2], xi: [f64; 2]) -> f64;

    /// Whether `a(x, t xi) = t^m a(x, xi)` for `|xi| >= 1/2`, `t >= 1`.
    fn is_homogeneous(&self) -> bool {
        false
    }

    /// Whether the symbol does not depend on `x`; enables the pure
    /// multiplier path.
    fn is_x_independent(&self) -> bool {
        false
    }

    /// Samples `x -> a(x, xi)` on the grid.
    fn sample(&self, grid: &Grid, xi: [f64; 2]) -> Result<PeriodicField> {
        let vals: Vec<f64> = (0..grid.len()).map(|i| self.eval(grid.coordinate(i), xi)).collect();
        if let Some(v) = vals.iter().find(|v| !v.is_finite()) {
            return Err(Error::Symbol(format!("non-finite value {v} at xi = {xi:?}")));
        }
        PeriodicField::from_real(grid.clone(), vals)
    }
}

type Evaluator = dyn Fn([f64; 2], [f64; 2]) -> f64 + Send + Sync;

/// Symbol given by a closure.
#[derive(Clone)]
pub struct SymbolSampler {
    pub order: f64,
    pub homogeneous: bool,
    evaluator: Arc<Evaluator>,
}

impl SymbolSampler {
    pub fn new(
        order: f64,
        homogeneous: bool,
        f: impl Fn([f64; 2], [f64; 2]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        SymbolSampler { order, homogeneous, evaluator: Arc::new(f) }
    }
}

impl fmt::Debug for SymbolSampler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolSampler")
            .field("order", &self.order)
            .field("homogeneous", &self.homogeneous)
            .finish()
    }
}

impl Symbol for SymbolSampler {
    fn order(&self) -> f64 {
        self.order
    }
    fn eval(&self, x: [f64; 2], xi: [f64; 2]) -> f64 {
        (self.evaluator)(x, xi)
    }
    fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
}

type Multiplier = dyn Fn([f64; 2]) -> f64 + Send + Sync;

/// An `x`-independent symbol `a(xi)`.
#[derive(Clone)]
pub struct FourierMultiplierSymbol {
    pub order: f64,
    pub homogeneous: bool,
    m: Arc<Multiplier>,
}

impl FourierMultiplierSymbol {
    pub fn new(order: f64, homogeneous: bool, m: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        FourierMultiplierSymbol { order, homogeneous, m: Arc::new(m) }
    }

    /// `|xi|`.
    pub fn abs_xi() -> Self {
        Self::new(1.0, true, |k| (k[0] * k[0] + k[1] * k[1]).sqrt())
    }
}

impl fmt::Debug for FourierMultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierMultiplierSymbol").field("order", &self.order).finish()
    }
}

impl Symbol for FourierMultiplierSymbol {
    fn order(&self) -> f64 {
        self.order
    }
    fn eval(&self, _x: [f64; 2], xi: [f64; 2]) -> f64 {
        (self.m)(xi)
    }
    fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
    fn is_x_independent(&self) -> bool {
        true
    }
}

fn norm(k: [f64; 2]) -> f64 {
    (k[0] * k[0] + k[1] * k[1]).sqrt()
}

/// `u -> F^{-1}[m(xi) psi(xi) u_hat]`.
pub fn paradiff_multiplier(m: impl Fn([f64; 2]) -> f64, u: &PeriodicField) -> Result<PeriodicField> {
    u.validate()?;
    let c = CutoffFamily::default();
    let mut bad = None;
    let out = u.map_coefficients(|k, _, z| {
        let w = c.psi(norm(k));
        if w == 0.0 || z == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        let v = m(k);
        if !v.is_finite() {
            bad = Some((k, v));
        }
        z * (v * w)
    });
    if let Some((k, v)) = bad {
        return Err(Error::Symbol(format!("non-finite value {v} at xi = {k:?}")));
    }
    Ok(out)
}

/// Paradifferential quantization
/// `T_a u = sum_k sum_eta (S_{k-3} a(., eta)) psi(eta) phi_k(eta) u_hat(eta) e^{i eta x}`.
///
/// For each frequency `eta` the symbol is sampled in `x` and smoothed by the
/// multiplier `sum_k phi_k(eta) zeta_{k-3}(D_x)`, with `zeta_j` the true
/// dilate for negative `j` (it keeps only the `x`-mean there). An
/// `x`-independent symbol reduces to the multiplier `a(xi) psi(xi)`.
pub fn paradiff_apply(a: &dyn Symbol, u: &PeriodicField) -> Result<PeriodicField> {
    if a.order() > 2.0 {
        return Err(Error::Symbol(format!("order {} exceeds 2", a.order())));
    }
    if a.is_x_independent() {
        return paradiff_multiplier(|k| a.eval([0.0, 0.0], k), u);
    }
    u.validate()?;
    let grid = u.grid().clone();
    let c = CutoffFamily::default();
    let kmax = super::littlewood::block_count(u);
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    let uc = u.coefficients();
    for (idx, &z) in uc.iter().enumerate() {
        let eta = grid.frequency(idx);
        let r = norm(eta);
        let w = c.psi(r);
        if w == 0.0 || z.norm() == 0.0 {
            continue;
        }
        let weights: Vec<(i32, f64)> =
            (0..=kmax).map(|k| (k, c.phi(k, r))).filter(|&(_, p)| p != 0.0).collect();
        let sym = a.sample(&grid, eta)?;
        let smooth = sym.multiplier(|xi| {
            let rx = norm(xi);
            weights.iter().map(|&(k, p)| p * c.zeta_k(k - 3, rx)).sum()
        });
        let amp = z * w;
        for (j, (out, s)) in acc.iter_mut().zip(smooth.samples()).enumerate() {
            let x = grid.coordinate(j);
            let phase = Complex64::from_polar(1.0, eta[0] * x[0] + eta[1] * x[1]);
            *out += s.re * amp * phase;
        }
    }
    PeriodicField::from_samples(grid, acc)
}

/// Maximum relative deviation from `a(x, t xi) = t^m a(x, xi)` over the
/// given points, directions with `|xi| >= 1/2` and dilations `t`.
pub fn check_homogeneity(a: &dyn Symbol, xs: &[[f64; 2]], xis: &[[f64; 2]], ts: &[f64]) -> Result<f64> {
    let m = a.order();
    let mut worst: f64 = 0.0;
    for &x in xs {
        for &xi in xis.iter().filter(|xi| norm(**xi) >= 0.5) {
            let base = a.eval(x, xi);
            for &t in ts {
                let scaled = a.eval(x, [t * xi[0], t * xi[1]]);
                if !base.is_finite() || !scaled.is_finite() {
                    return Err(Error::Symbol(format!("non-finite value at x = {x:?}, xi = {xi:?}")));
                }
                let expect = t.powf(m) * base;
                let dev = (scaled - expect).abs() / expect.abs().max(1e-300);
                worst = worst.max(dev);
            }
        }
    }
    Ok(worst)
}
