use crate::error::{Error, Result};

/// `ρ = A^{-1/γ} p^{1/γ} e^{-S/γ}`, the inverse of `p = A ρ^γ e^S`.
pub fn eos_density(p: f64, s: f64, a: f64, gamma: f64) -> Result<f64> {
    check_constants(a, gamma)?;
    if !(p > 0.0) {
        return Err(Error::State(format!("pressure {p} is not positive")));
    }
    Ok((p / a).powf(1.0 / gamma) * (-s / gamma).exp())
}

/// `p = A ρ^γ e^S`.
pub fn eos_pressure(rho: f64, s: f64, a: f64, gamma: f64) -> Result<f64> {
    check_constants(a, gamma)?;
    if !(rho > 0.0) {
        return Err(Error::State(format!("density {rho} is not positive")));
    }
    Ok(a * rho.powf(gamma) * s.exp())
}

/// Entropy `S = ln(p / (A ρ^γ))` of a given `(p, ρ)` pair.
pub fn eos_entropy(p: f64, rho: f64, a: f64, gamma: f64) -> Result<f64> {
    check_constants(a, gamma)?;
    if !(p > 0.0 && rho > 0.0) {
        return Err(Error::State(format!("non-positive pair p = {p}, rho = {rho}")));
    }
    Ok((p / (a * rho.powf(gamma))).ln())
}

fn check_constants(a: f64, gamma: f64) -> Result<()> {
    if !(a > 0.0) || !(gamma > 1.0) {
        return Err(Error::Domain(format!("state constants need A > 0 and gamma > 1, got A = {a}, gamma = {gamma}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!((eos_density(1.0, 0.0, 1.0, 2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((eos_density(4.0, 0.0, 1.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(eos_density(0.0, 0.0, 1.0, 2.0).is_err());
        let r = 1.7;
        let p = eos_pressure(r, 0.3, 2.0, 1.4).unwrap();
        assert!((eos_density(p, 0.3, 2.0, 1.4).unwrap() - r).abs() < 1e-12);
        assert!((eos_entropy(p, r, 2.0, 1.4).unwrap() - 0.3).abs() < 1e-12);
    }
}
