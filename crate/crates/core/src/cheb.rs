//! Chebyshev–Lobatto collocation on `[-1, 1]` with nodes `t_j = cos(pi j / n)`
//! (`t_0 = 1`, `t_n = -1`).

use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct Chebyshev {
    n: usize,
    nodes: Vec<f64>,
    /// Row-major `(n+1) x (n+1)` first-derivative matrix.
    diff: Vec<f64>,
    weights: Vec<f64>,
}

impl Chebyshev {
    /// `n` intervals, `n + 1` nodes.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two Chebyshev intervals");
        let nodes: Vec<f64> = (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect();
        let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
        let m = n + 1;
        let mut diff = vec![0.0; m * m];
        for i in 0..m {
            let mut row_sum = 0.0;
            for j in 0..m {
                if i != j {
                    let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    // nodes differences via the sine identity for accuracy
                    let dx = -2.0
                        * (PI * (i + j) as f64 / (2 * n) as f64).sin()
                        * (PI * (i as f64 - j as f64) / (2 * n) as f64).sin();
                    let v = c(i) / c(j) * sign / dx;
                    diff[i * m + j] = v;
                    row_sum += v;
                }
            }
            diff[i * m + i] = -row_sum;
        }
        Chebyshev { n, nodes, diff, weights: clenshaw_curtis(n) }
    }

    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn diff_matrix(&self) -> &[f64] {
        &self.diff
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.diff[i * (self.n + 1) + j]
    }

    /// Clenshaw–Curtis weights on `[-1, 1]`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn derivative(&self, v: &[f64]) -> Vec<f64> {
        let m = self.n + 1;
        (0..m).map(|i| (0..m).map(|j| self.diff[i * m + j] * v[j]).sum()).collect()
    }

    /// Barycentric interpolation at `t`.
    pub fn interpolate(&self, v: &[f64], t: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, (&tj, &vj)) in self.nodes.iter().zip(v).enumerate() {
            let d = t - tj;
            if d.abs() < 1e-15 {
                return vj;
            }
            let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
            if j == 0 || j == self.n {
                w *= 0.5;
            }
            num += w * vj / d;
            den += w / d;
        }
        num / den
    }
}

fn clenshaw_curtis(n: usize) -> Vec<f64> {
    let theta: Vec<f64> = (0..=n).map(|j| PI * j as f64 / n as f64).collect();
    let mut w = vec![0.0; n + 1];
    let nf = n as f64;
    let mut v = vec![1.0; n.saturating_sub(1)];
    if n % 2 == 0 {
        w[0] = 1.0 / (nf * nf - 1.0);
        w[n] = w[0];
        for k in 1..n / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta[i + 1]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            *vi -= (nf * theta[i + 1]).cos() / (nf * nf - 1.0);
        }
    } else {
        w[0] = 1.0 / (nf * nf);
        w[n] = w[0];
        for k in 1..=(n - 1) / 2 {
            let kf = k as f64;
            for (i, vi) in v.iter_mut().enumerate() {
                *vi -= 2.0 * (2.0 * kf * theta[i + 1]).cos() / (4.0 * kf * kf - 1.0);
            }
        }
    }
    for (i, vi) in v.iter().enumerate() {
        w[i + 1] = 2.0 * vi / nf;
    }
    w
}
