use crate::error::{Error, Result};

pub(crate) struct GmresOptions {
    pub restart: usize,
    pub max_iter: usize,
    pub rel_tol: f64,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { restart: 80, max_iter: 2000, rel_tol: 1e-13 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Restarted right-preconditioned GMRES for `A x = b`.
/// Returns the solution and the number of inner iterations performed.
pub(crate) fn gmres(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    precond: &dyn Fn(&[f64]) -> Vec<f64>,
    b: &[f64],
    opts: &GmresOptions,
) -> Result<(Vec<f64>, usize)> {
    let n = b.len();
    let bnorm = norm(b);
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let target = opts.rel_tol * bnorm;
    let mut total = 0;
    let mut r = b.to_vec();
    let mut rnorm = bnorm;
    while total < opts.max_iter {
        let m = opts.restart;
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        let mut h = vec![vec![0.0; m]; m + 1];
        let (mut cs, mut sn) = (vec![0.0; m], vec![0.0; m]);
        let mut g = vec![0.0; m + 1];
        g[0] = rnorm;
        v.push(r.iter().map(|a| a / rnorm).collect());
        let mut k_used = 0;
        for k in 0..m {
            let z = precond(&v[k]);
            let mut w = apply(&z);
            // modified Gram–Schmidt, applied twice for robustness
            for _ in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = dot(&w, vi);
                    h[i][k] += hij;
                    for (wl, vl) in w.iter_mut().zip(vi) {
                        *wl -= hij * vl;
                    }
                }
            }
            let wn = norm(&w);
            h[k + 1][k] = wn;
            for i in 0..k {
                let t = cs[i] * h[i][k] + sn[i] * h[i + 1][k];
                h[i + 1][k] = -sn[i] * h[i][k] + cs[i] * h[i + 1][k];
                h[i][k] = t;
            }
            let denom = (h[k][k] * h[k][k] + h[k + 1][k] * h[k + 1][k]).sqrt();
            if denom == 0.0 {
                k_used = k;
                break;
            }
            cs[k] = h[k][k] / denom;
            sn[k] = h[k + 1][k] / denom;
            h[k][k] = denom;
            h[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            total += 1;
            k_used = k + 1;
            let breakdown = wn <= 1e-300;
            if g[k + 1].abs() <= target || breakdown || total >= opts.max_iter {
                break;
            }
            v.push(w.iter().map(|a| a / wn).collect());
        }
        // back substitution
        let mut y = vec![0.0; k_used];
        for i in (0..k_used).rev() {
            let mut s = g[i];
            for l in i + 1..k_used {
                s -= h[i][l] * y[l];
            }
            y[i] = s / h[i][i];
        }
        let mut dz = vec![0.0; n];
        for (yi, vi) in y.iter().zip(&v) {
            for (d, a) in dz.iter_mut().zip(vi) {
                *d += yi * a;
            }
        }
        let dx = precond(&dz);
        for (xi, d) in x.iter_mut().zip(&dx) {
            *xi += d;
        }
        let ax = apply(&x);
        r = b.iter().zip(&ax).map(|(a, c)| a - c).collect();
        let prev = rnorm;
        rnorm = norm(&r);
        // stop on convergence or once restarts no longer pay off (round-off floor)
        if rnorm <= target * 10.0 || k_used == 0 || rnorm > 0.5 * prev {
            break;
        }
    }
    if !rnorm.is_finite() {
        return Err(Error::NoConvergence { residual: rnorm, iterations: total });
    }
    Ok((x, total))
}

/// `||A x - b|| / ||b||` (absolute if `b = 0`).
#[cfg(test)]
pub(crate) fn relative_residual(apply: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], b: &[f64]) -> f64 {
    let ax = apply(x);
    let r: f64 = b.iter().zip(&ax).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
    let bn = norm(b);
    if bn > 0.0 {
        r / bn
    } else {
        r
    }
}

/// `||M⁻¹(b - A x)|| / ||M⁻¹ b||`: the residual measured in the norm of the
/// preconditioned system, insensitive to the row scaling of spectral operators.
pub(crate) fn preconditioned_residual(
    apply: &dyn Fn(&[f64]) -> Vec<f64>,
    precond: &dyn Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
    b: &[f64],
) -> f64 {
    let ax = apply(x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(a, c)| a - c).collect();
    let (mr, mb) = (norm(&precond(&r)), norm(&precond(b)));
    if mb > 0.0 {
        mr / mb
    } else {
        mr
    }
}
