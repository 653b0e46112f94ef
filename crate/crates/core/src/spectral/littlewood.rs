use super::cutoff::CutoffFamily;
use super::field::PeriodicField;
use crate::error::{Error, Result};

fn norm(k: [f64; 2]) -> f64 {
    (k[0] * k[0] + k[1] * k[1]).sqrt()
}

/// `(sum_k (1+|k|^2)^s |c_k|^2)^{1/2}`.
pub fn sobolev_norm(u: &PeriodicField, s: f64) -> Result<f64> {
    if !(s >= -2.0) {
        return Err(Error::Domain(format!("Sobolev index {s} below -2")));
    }
    u.validate()?;
    let grid = u.grid();
    let total: f64 = u
        .coefficients()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = grid.frequency(i);
            (1.0 + k[0] * k[0] + k[1] * k[1]).powf(s) * c.norm_sqr()
        })
        .sum();
    Ok(total.sqrt())
}

/// Dyadic block `Delta_k u`; zero for `k < 0`.
pub fn lp_block(u: &PeriodicField, k: i32) -> Result<PeriodicField> {
    u.validate()?;
    let c = CutoffFamily::default();
    Ok(u.multiplier(|xi| c.phi(k, norm(xi))))
}

/// Low-pass `S_k u = sum_{l <= k} Delta_l u`; zero for `k < 0`.
pub fn lowpass(u: &PeriodicField, k: i32) -> Result<PeriodicField> {
    u.validate()?;
    let c = CutoffFamily::default();
    Ok(u.multiplier(|xi| c.lowpass(k, norm(xi))))
}

pub(crate) fn block_count(u: &PeriodicField) -> i32 {
    CutoffFamily::default().max_block(u.grid().max_frequency_norm()) + 1
}

fn blocks(u: &PeriodicField, kmax: i32) -> Vec<PeriodicField> {
    let c = CutoffFamily::default();
    (0..=kmax).map(|k| u.multiplier(|xi| c.phi(k, norm(xi)))).collect()
}

/// Bony paraproduct `T_a u = sum_k S_{k-3} a * Delta_k u`, with dealiased
/// factors and products.
pub fn paraproduct(a: &PeriodicField, u: &PeriodicField) -> Result<PeriodicField> {
    a.check_same_grid(u)?;
    a.validate()?;
    u.validate()?;
    let kmax = block_count(u);
    let c = CutoffFamily::default();
    let ad = a.dealias();
    let ub = blocks(&u.dealias(), kmax);
    let mut acc = PeriodicField::zeros(u.grid());
    for (k, uk) in ub.iter().enumerate().skip(3) {
        let low = ad.multiplier(|xi| c.lowpass(k as i32 - 3, norm(xi)));
        acc = &acc + &low.pointwise(uk);
    }
    Ok(acc.dealias())
}

/// The three pieces of `a * u = T_a u + T_u a + R(a, u)`.
#[derive(Clone, Debug)]
pub struct BonyParts {
    pub t_a_u: PeriodicField,
    pub t_u_a: PeriodicField,
    pub remainder: PeriodicField,
}

impl BonyParts {
    pub fn sum(&self) -> PeriodicField {
        &(&self.t_a_u + &self.t_u_a) + &self.remainder
    }
}

/// Splits the dealiased product `a * u` into paraproducts and remainder.
/// Block pairs `(k, l)` with `l <= k - 3` go to `T_u a`, `k <= l - 3` to
/// `T_a u`, and the diagonal band `|k - l| <= 2` to `R(a, u)`, so the parts
/// add up to the product exactly on the retained band.
pub fn bony_decompose(a: &PeriodicField, u: &PeriodicField) -> Result<BonyParts> {
    a.check_same_grid(u)?;
    a.validate()?;
    u.validate()?;
    let kmax = block_count(u);
    let ab = blocks(&a.dealias(), kmax);
    let ub = blocks(&u.dealias(), kmax);
    let zero = PeriodicField::zeros(u.grid());
    let (mut tau, mut tua, mut rem) = (zero.clone(), zero.clone(), zero);
    for (k, ak) in ab.iter().enumerate() {
        for (l, ul) in ub.iter().enumerate() {
            let (k, l) = (k as i32, l as i32);
            let p = ak.pointwise(ul);
            if k <= l - 3 {
                tau = &tau + &p;
            } else if l <= k - 3 {
                tua = &tua + &p;
            } else {
                rem = &rem + &p;
            }
        }
    }
    Ok(BonyParts { t_a_u: tau.dealias(), t_u_a: tua.dealias(), remainder: rem.dealias() })
}
