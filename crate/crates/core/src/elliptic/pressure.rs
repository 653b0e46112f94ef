use super::divcurl::Velocity;
use super::operator::{solve_laplace, Boundary, EllipticProblem};
use crate::error::{Error, Result};
use crate::geometry::{Side, StripField};

/// Incompressible pressure per phase: `-Δp = ρ tr(∇u)^2`, `p = 0` on `Γ_f`,
/// `∂_3 p = -ρ g` on the walls (`g = 0` is the unforced system).
pub fn pressure_incompressible(u: [&Velocity; 2], rho: [f64; 2], g: f64) -> Result<[StripField; 2]> {
    let mut out = Vec::with_capacity(2);
    for (k, (vel, r)) in u.iter().zip(rho).enumerate() {
        let side = if k == 0 { Side::Minus } else { Side::Plus };
        let map = vel.map();
        if map.side() != side {
            return Err(Error::Shape("velocities must be ordered [minus, plus]".into()));
        }
        let nx = map.nx();
        let src: Vec<f64> = vel.trace_grad_squared().values().iter().map(|t| -r * t).collect();
        let p = solve_laplace(&EllipticProblem::new(
            map,
            src,
            Boundary::Dirichlet(vec![0.0; nx]),
            Boundary::Neumann(vec![-r * g; nx]),
        ))?;
        out.push(p);
    }
    let plus = out.pop().expect("two sides");
    let minus = out.pop().expect("two sides");
    Ok([minus, plus])
}

/// `max |Δp + ρ tr(∇u)^2|` in the interior rows.
pub fn pressure_residual(p: &StripField, u: &Velocity, rho: f64) -> f64 {
    let lap = p.laplacian();
    let t = u.trace_grad_squared();
    let g = &p.map().grid;
    let mut worst: f64 = 0.0;
    for j in 1..g.ny {
        for i in 0..g.nx {
            let n = j * g.nx + i;
            worst = worst.max((lap.values()[n] + rho * t.values()[n]).abs());
        }
    }
    worst
}
