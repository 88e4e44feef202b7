//! Scalar SDE models `dX = b(t, X) dt + σ(t, X) dB` on `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::rng::StreamKey;

type FieldFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// `sign` with `sign(0) = 0`.
pub fn sign0(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// A coefficient `(t, x) ↦ value`.
#[derive(Clone)]
pub enum Field {
    Constant(f64),
    /// `a x`
    Linear(f64),
    /// `a sign(x)`
    Sign(f64),
    Custom { name: String, f: FieldFn },
}

impl Field {
    pub fn custom(name: impl Into<String>, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Field::Custom { name: name.into(), f: Arc::new(f) }
    }

    #[inline]
    pub fn eval(&self, t: f64, x: f64) -> f64 {
        match self {
            Field::Constant(c) => *c,
            Field::Linear(a) => a * x,
            Field::Sign(a) => a * sign0(x),
            Field::Custom { f, .. } => f(t, x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Field::Constant(c) | Field::Linear(c) | Field::Sign(c) if *c == 0.0)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Constant(c) => write!(f, "Constant({c})"),
            Field::Linear(a) => write!(f, "Linear({a})"),
            Field::Sign(a) => write!(f, "Sign({a})"),
            Field::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// Named presets, used by configs and manifests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelId {
    /// `b = 0`, `σ = 1`.
    Zero,
    /// `b = 1`, `σ = 1`.
    Constant,
    /// `b = sign(x)`, `σ = 1`.
    Sign,
    /// `b = -x`, `σ = 0`: the linear ODE.
    Linear,
}

impl ModelId {
    pub const ALL: [ModelId; 4] = [ModelId::Zero, ModelId::Constant, ModelId::Sign, ModelId::Linear];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::Zero => "zero",
            ModelId::Constant => "constant",
            ModelId::Sign => "sign",
            ModelId::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SdeModel {
    pub id: String,
    pub drift: Field,
    pub diffusion: Field,
    pub x0: f64,
}

impl SdeModel {
    pub fn new(id: impl Into<String>, drift: Field, diffusion: Field, x0: f64) -> Self {
        Self { id: id.into(), drift, diffusion, x0 }
    }

    pub fn preset(id: ModelId) -> Self {
        match id {
            ModelId::Zero => Self::new(id.name(), Field::Constant(0.0), Field::Constant(1.0), 0.0),
            ModelId::Constant => Self::new(id.name(), Field::Constant(1.0), Field::Constant(1.0), 0.0),
            ModelId::Sign => Self::new(id.name(), Field::Sign(1.0), Field::Constant(1.0), 0.0),
            ModelId::Linear => Self::new(id.name(), Field::Linear(-1.0), Field::Constant(0.0), 1.0),
        }
    }

    /// Checks `1/k1 <= σ² <= k1` at `n_points` random `(t, x)` with
    /// `t ∈ [0, 1]`, `x ∈ [-radius, radius]`. Returns the observed `(min σ², max σ²)`.
    pub fn ellipticity(&self, k1: f64, radius: f64, n_points: usize, seed: u64) -> Result<(f64, f64)> {
        if !(k1 >= 1.0) || !(radius > 0.0) || n_points == 0 {
            return Err(Error::InvalidParameter(format!(
                "need k1 >= 1, radius > 0, n_points >= 1; got {k1}, {radius}, {n_points}"
            )));
        }
        let mut rng = StreamKey::new(seed).rng(0);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for _ in 0..n_points {
            let t: f64 = rng.random();
            let x = radius * (2.0 * rng.random::<f64>() - 1.0);
            let s = self.diffusion.eval(t, x);
            if !s.is_finite() {
                return Err(Error::Hypothesis(format!("σ({t}, {x}) = {s} is not finite")));
            }
            lo = lo.min(s * s);
            hi = hi.max(s * s);
        }
        if lo < 1.0 / k1 || hi > k1 {
            return Err(Error::Hypothesis(format!(
                "σ² ranges over [{lo}, {hi}], outside [1/{k1}, {k1}]"
            )));
        }
        Ok((lo, hi))
    }
}
