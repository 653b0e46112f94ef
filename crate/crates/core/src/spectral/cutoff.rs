use serde::{Deserialize, Serialize};

/// Degree-7 smoothstep: 0 for `t <= 0`, 1 for `t >= 1`, with three vanishing
/// derivatives at both ends.
pub fn smoothstep7(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let t4 = t * t * t * t;
        t4 * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)))
    }
}

/// Radial cutoffs for the dyadic decomposition.
///
/// `zeta` equals 1 on `|xi| <= inner` and 0 on `|xi| >= outer`;
/// `zeta_k(xi) = zeta(2^-k xi)` for every integer `k`, `phi_0 = zeta` and
/// `phi_k = zeta_k - zeta_{k-1}`. The high-pass `psi` vanishes on `|xi| <= 1`
/// and equals 1 on `|xi| >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutoffFamily {
    pub inner: f64,
    pub outer: f64,
}

impl Default for CutoffFamily {
    fn default() -> Self {
        CutoffFamily { inner: 1.1, outer: 1.9 }
    }
}

impl CutoffFamily {
    pub fn zeta(&self, r: f64) -> f64 {
        1.0 - smoothstep7((r - self.inner) / (self.outer - self.inner))
    }

    pub fn zeta_k(&self, k: i32, r: f64) -> f64 {
        self.zeta(r * 2f64.powi(-k))
    }

    /// Dyadic block multiplier; zero for `k < 0`.
    pub fn phi(&self, k: i32, r: f64) -> f64 {
        match k {
            k if k < 0 => 0.0,
            0 => self.zeta(r),
            k => self.zeta_k(k, r) - self.zeta_k(k - 1, r),
        }
    }

    /// Low-pass `S_k` multiplier `sum_{0 <= l <= k} phi_l = zeta_k` (zero for `k < 0`).
    pub fn lowpass(&self, k: i32, r: f64) -> f64 {
        if k < 0 {
            0.0
        } else {
            self.zeta_k(k, r)
        }
    }

    pub fn psi(&self, r: f64) -> f64 {
        smoothstep7(r - 1.0)
    }

    /// Admissible cutoff `chi(xi, eta) = sum_k zeta_{k-3}(xi) phi_k(eta)`
    /// (with `zeta_{k-3}` vanishing for `k < 3`, as in the paraproduct).
    pub fn chi(&self, xi: f64, eta: f64) -> f64 {
        let kmax = self.max_block(eta.abs().max(xi.abs()) + 1.0);
        (3..=kmax).map(|k| self.lowpass(k - 3, xi) * self.phi(k, eta)).sum()
    }

    /// Smallest `K` such that `phi_k` vanishes for every `k > K` at
    /// frequencies up to `rmax`.
    pub fn max_block(&self, rmax: f64) -> i32 {
        let mut k = 0;
        while self.inner * 2f64.powi(k) < rmax {
            k += 1;
        }
        k
    }

    /// Range of block indices whose multiplier is nonzero at radius `r`.
    pub fn blocks_at(&self, r: f64) -> std::ops::RangeInclusive<i32> {
        let kmax = self.max_block(r.max(1.0) * 1.0000001);
        let kmin = (0..=kmax).find(|&k| self.phi(k, r) != 0.0).unwrap_or(kmax);
        let kend = (kmin..=kmax).rev().find(|&k| self.phi(k, r) != 0.0).unwrap_or(kmin);
        kmin..=kend
    }
}
