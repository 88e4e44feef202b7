//! Drift taming: `b^n = clip(b, -M_n, M_n)`.

use serde::{Deserialize, Serialize};

use super::model::Field;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum TamingPolicy {
    /// No taming: `b^n = b`.
    Identity,
    /// `M_n = n^exponent / ln(n + 1)` when `log_factor`, else `n^exponent`.
    Clip { exponent: f64, log_factor: bool },
}

impl Default for TamingPolicy {
    fn default() -> Self {
        TamingPolicy::Clip { exponent: 0.5, log_factor: true }
    }
}

impl TamingPolicy {
    /// Clip level `M_n`; infinite for [`TamingPolicy::Identity`].
    pub fn level(&self, n: usize) -> f64 {
        match *self {
            TamingPolicy::Identity => f64::INFINITY,
            TamingPolicy::Clip { exponent, log_factor } => {
                let n = n as f64;
                let m = n.powf(exponent);
                if log_factor {
                    m / (n + 1.0).ln()
                } else {
                    m
                }
            }
        }
    }
}

/// `b^n` together with its clip level and the diagnostic `n^{-(1/2 - 1/q)} M_n`.
#[derive(Debug, Clone)]
pub struct TamedDrift {
    pub drift: Field,
    pub n: usize,
    pub level: f64,
    pub diagnostic: f64,
}

impl TamedDrift {
    #[inline]
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        let b = self.drift.eval(t, x);
        if b.is_nan() {
            return b;
        }
        b.clamp(-self.level, self.level)
    }
}

/// Tames `b` at mesh `n` with integrability exponent `q ∈ (2, ∞]`.
pub fn tame_drift(b: &Field, n: usize, q: f64, policy: &TamingPolicy) -> Result<TamedDrift> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    if !(q > 2.0) {
        return Err(Error::InvalidParameter(format!("q = {q} must lie in (2, inf]")));
    }
    if let TamingPolicy::Clip { exponent, .. } = policy {
        if !(*exponent > 0.0) {
            return Err(Error::InvalidParameter(format!("clip exponent {exponent} must be > 0")));
        }
    }
    let level = policy.level(n);
    let diagnostic = (n as f64).powf(-(0.5 - 1.0 / q)) * level;
    Ok(TamedDrift { drift: b.clone(), n, level, diagnostic })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_below_level() {
        let t = tame_drift(&Field::Sign(1.0), 100, f64::INFINITY, &TamingPolicy::default()).unwrap();
        assert!(t.level > 1.0);
        for x in [-2.0, -0.1, 0.0, 0.3] {
            assert_eq!(t.eval(0.0, x), Field::Sign(1.0).eval(0.0, x));
        }
    }

    #[test]
    fn clips_singular_drift() {
        let b = Field::custom("|x|^-1/2", |_, x: f64| x.abs().powf(-0.5));
        let t = tame_drift(&b, 64, f64::INFINITY, &TamingPolicy::default()).unwrap();
        let m = 8.0 / 65f64.ln();
        assert!((t.level - m).abs() < 1e-12);
        assert_eq!(t.eval(0.0, 0.0), m);
        assert_eq!(t.eval(0.0, 1e-6), m);
        assert_eq!(t.eval(0.0, 4.0), 0.5);
    }

    #[test]
    fn diagnostic_vanishes_like_inverse_log() {
        let n = (9f64.exp() - 1.0).round() as usize;
        let t = tame_drift(&Field::Constant(0.0), n, f64::INFINITY, &TamingPolicy::default()).unwrap();
        assert!((t.diagnostic - 1.0 / ((n + 1) as f64).ln()).abs() < 1e-12);
        assert!((t.diagnostic - 1.0 / 9.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_exponents() {
        assert!(tame_drift(&Field::Constant(0.0), 0, 4.0, &TamingPolicy::default()).is_err());
        assert!(tame_drift(&Field::Constant(0.0), 4, 2.0, &TamingPolicy::default()).is_err());
    }
}
