//! Closed-form right-hand sides of the moment and exponential estimates.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Constant in the moment and exponential John–Nirenberg bounds.
pub const JN_CONSTANT: f64 = 11.0;
/// Constant in the exponential bound for controlled processes.
pub const VMO_CONSTANT: f64 = 22.0;

/// Parameters shared by the bound calculators.
///
/// `c_p` and `big_c_p` are the unspecified constants of the super-exponential
/// and moment estimates; callers supply them and receive ratios, not verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundParameters {
    pub p: f64,
    pub m: f64,
    pub lambda: f64,
    pub alpha: f64,
    pub c_p: f64,
    pub big_c_p: f64,
}

impl Default for BoundParameters {
    fn default() -> Self {
        Self {
            p: 2.0,
            m: 2.0,
            lambda: 1.0,
            alpha: 0.5,
            c_p: 1.0,
            big_c_p: 1.0,
        }
    }
}

impl BoundParameters {
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.p >= 1.0) {
            bad.push(format!("p = {} must be >= 1", self.p));
        }
        if !(self.m >= 1.0) {
            bad.push(format!("m = {} must be >= 1", self.m));
        }
        if !(self.lambda > 0.0) {
            bad.push(format!("lambda = {} must be > 0", self.lambda));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            bad.push(format!("alpha = {} must lie in (0, 1]", self.alpha));
        }
        if !(self.c_p > 0.0 && self.big_c_p > 0.0) {
            bad.push("c_p and C_p must be > 0".to_string());
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(bad.join("; ")))
        }
    }
}

fn factorial(p: u32) -> f64 {
    (1..=p).map(f64::from).product()
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidParameter(format!("{name} = {x} must be >= 0")));
    }
    Ok(())
}

/// `p! (11 ρ)^p`. Saturates to `+inf` on overflow.
pub fn jn_moment_bound(rho: f64, p: u32) -> Result<f64> {
    check_nonneg("rho", rho)?;
    if p == 0 {
        return Err(Error::InvalidParameter("p must be >= 1".into()));
    }
    Ok(factorial(p) * (JN_CONSTANT * rho).powi(p as i32))
}

/// `∏_k (1 - λ ρ_k)^{-1}`; every factor needs `λ ρ_k < 1`.
pub fn khasminskii_product(lambda: f64, rhos: &[f64]) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("lambda = {lambda} must be > 0")));
    }
    let mut product = 1.0;
    for (cell, rho) in rhos.iter().enumerate() {
        check_nonneg("rho", *rho)?;
        let x = lambda * rho;
        if x >= 1.0 {
            return Err(Error::PartitionTooCoarse { cell, product: x });
        }
        product /= 1.0 - x;
    }
    Ok(product)
}

/// Base-2 logarithm of [`exp_vmoa_bound`]: `1 + (22 λ)^p w`.
pub fn exp_vmoa_log2_bound(lambda: f64, p: f64, w: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("need lambda > 0 and p >= 1, got {lambda}, {p}")));
    }
    check_nonneg("w", w)?;
    if w == 0.0 {
        return Ok(1.0);
    }
    Ok(1.0 + (VMO_CONSTANT * lambda).powf(p) * w)
}

/// `2^{1 + (22 λ)^p w}`. Saturates to `+inf`.
pub fn exp_vmoa_bound(lambda: f64, p: f64, w: f64) -> Result<f64> {
    Ok(exp_vmoa_log2_bound(lambda, p, w)?.exp2())
}

/// `C_p Γ(m(1 - 1/p) + 1) w^{m/p}` for `p > 1`.
pub fn vmo_moment_bound(m: f64, p: f64, w: f64, big_c_p: f64) -> Result<f64> {
    if p == 1.0 {
        return Err(Error::InvalidParameter(
            "p = 1 has no moment bound of this form; use the pathwise v1 check".into(),
        ));
    }
    if !(p > 1.0) || !(m >= 1.0) || !(big_c_p > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need p > 1, m >= 1, C_p > 0; got p = {p}, m = {m}, C_p = {big_c_p}"
        )));
    }
    check_nonneg("w", w)?;
    Ok(big_c_p * gamma(m * (1.0 - 1.0 / p) + 1.0) * w.powf(m / p))
}

/// Exponential bound for a process of finite Hölder-type mean oscillation:
/// `2^{1 + (22 [Y] λ)^{1/α} τ}`.
pub fn rsde_exp_bound(lambda: f64, alpha: f64, seminorm: f64, tau: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    check_nonneg("seminorm", seminorm)?;
    check_nonneg("tau", tau)?;
    exp_vmoa_bound(lambda, 1.0 / alpha, seminorm.powf(1.0 / alpha) * tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn jn_examples() {
        assert_eq!(jn_moment_bound(0.0, 3).unwrap(), 0.0);
        assert_relative_eq!(jn_moment_bound(0.1, 2).unwrap(), 2.42, max_relative = 1e-14);
        assert_eq!(jn_moment_bound(1.0, 1).unwrap(), 11.0);
        assert_eq!(jn_moment_bound(1e300, 2).unwrap(), f64::INFINITY);
    }

    #[test]
    fn khasminskii_examples() {
        assert_relative_eq!(khasminskii_product(0.5, &[0.5, 0.5]).unwrap(), 16.0 / 9.0, max_relative = 1e-14);
        assert_eq!(khasminskii_product(0.5, &[]).unwrap(), 1.0);
        assert!(matches!(
            khasminskii_product(1.0, &[1.0]),
            Err(Error::PartitionTooCoarse { cell: 0, .. })
        ));
    }

    #[test]
    fn exp_vmoa_examples() {
        assert_eq!(exp_vmoa_bound(0.3, 2.0, 0.0).unwrap(), 2.0);
        assert_relative_eq!(exp_vmoa_bound(0.01, 2.0, 1.0).unwrap(), 2f64.powf(1.0484), max_relative = 1e-12);
        assert_relative_eq!(exp_vmoa_bound(0.01, 2.0, 1.0).unwrap(), 2.068_234_829_464_414, max_relative = 1e-14);
    }

    #[test]
    fn moment_examples() {
        assert_relative_eq!(vmo_moment_bound(2.0, 2.0, 1.0, 1.0).unwrap(), 1.0, max_relative = 1e-10);
        assert_relative_eq!(vmo_moment_bound(4.0, 2.0, 1.0, 1.0).unwrap(), 2.0, max_relative = 1e-10);
        assert_relative_eq!(vmo_moment_bound(2.0, 2.0, 4.0, 1.0).unwrap(), 4.0, max_relative = 1e-10);
        assert!(vmo_moment_bound(2.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn gamma_accuracy_on_integers() {
        // Γ(n) = (n-1)! exactly representable up to n = 23
        for n in 1..=20u32 {
            let exact = factorial(n - 1);
            assert_relative_eq!(gamma(f64::from(n)), exact, max_relative = 1e-10);
        }
        assert_relative_eq!(gamma(0.5 + 1.0), std::f64::consts::PI.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn rsde_examples() {
        assert_eq!(rsde_exp_bound(0.5, 0.5, 0.0, 1.0).unwrap(), 2.0);
        assert_relative_eq!(rsde_exp_bound(1.0 / 22.0, 1.0, 1.0, 1.0).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(
            rsde_exp_bound(0.01, 0.5, 1.0, 1.0).unwrap(),
            exp_vmoa_bound(0.01, 2.0, 1.0).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn parameters_validate() {
        assert!(BoundParameters::default().validate().is_ok());
        let bad = BoundParameters { p: 0.5, alpha: 1.5, ..Default::default() };
        let msg = bad.validate().unwrap_err().to_string();
        assert!(msg.contains("p = 0.5") && msg.contains("alpha = 1.5"));
    }
}
