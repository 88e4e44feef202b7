//! Moment summaries, exponential moments and log-log rate fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{mean_stderr, quantile};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_outer: usize,
    pub n_inner: usize,
}

impl MomentEstimate {
    /// Mean and standard error of plain samples (`n_outer = 1`).
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        let (value, stderr) = mean_stderr(samples);
        Ok(Self { value, stderr, n_outer: 1, n_inner: samples.len() })
    }

    /// Is `target` within `k` standard errors?
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }
}

/// Empirical `E|X|^m` with standard error.
pub fn moment_estimate(samples: &[f64], m: f64) -> Result<MomentEstimate> {
    let powered: Vec<f64> = samples.iter().map(|x| x.abs().powf(m)).collect();
    MomentEstimate::from_samples(&powered)
}

/// Stand-in for an essential supremum over outer states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum EssSupProxy {
    /// Largest outer estimate.
    #[default]
    Max,
    /// Empirical `(1 - delta)` quantile of the outer estimates.
    Quantile { delta: f64 },
}

impl EssSupProxy {
    pub const DEFAULT_DELTA: f64 = 0.01;

    /// Applies the proxy to `(value, stderr)` pairs; the reported standard
    /// error is that of the outer estimate closest to the proxy value.
    pub fn apply(&self, outer: &[(f64, f64)]) -> Result<(f64, f64)> {
        if outer.is_empty() {
            return Err(Error::EmptySamples);
        }
        let value = match self {
            EssSupProxy::Max => outer.iter().map(|o| o.0).fold(f64::NEG_INFINITY, f64::max),
            EssSupProxy::Quantile { delta } => {
                let values: Vec<f64> = outer.iter().map(|o| o.0).collect();
                quantile(&values, 1.0 - delta)
            }
        };
        let nearest = outer
            .iter()
            .min_by(|a, b| (a.0 - value).abs().total_cmp(&(b.0 - value).abs()))
            .expect("nonempty");
        Ok((value, nearest.1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpMoment {
    pub estimate: MomentEstimate,
    /// Fraction of samples whose exponential was capped.
    pub truncation_rate: f64,
}

/// Mean of `min(e^{λ x}, truncation)`.
pub fn exp_moment(samples: &[f64], lambda: f64, truncation: f64) -> Result<ExpMoment> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(lambda > 0.0) || !(truncation > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda = {lambda} and truncation = {truncation} must be > 0"
        )));
    }
    let mut hits = 0usize;
    let values: Vec<f64> = samples
        .iter()
        .map(|x| {
            let e = (lambda * x).exp();
            if e > truncation {
                hits += 1;
                truncation
            } else {
                e
            }
        })
        .collect();
    Ok(ExpMoment {
        estimate: MomentEstimate::from_samples(&values)?,
        truncation_rate: hits as f64 / samples.len() as f64,
    })
}

/// Least-squares line through `(ln(1/n), ln error)`: `error ≈ C n^{-slope}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub slope_stderr: f64,
    pub ns: Vec<f64>,
    pub errors: Vec<f64>,
}

pub fn rate_fit(ns: &[f64], errors: &[f64]) -> Result<RateFit> {
    if ns.len() != errors.len() {
        return Err(Error::Shape(format!("{} sizes but {} errors", ns.len(), errors.len())));
    }
    if ns.len() < 3 {
        return Err(Error::InvalidParameter("a rate fit needs at least 3 points".into()));
    }
    if ns.iter().chain(errors).any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::InvalidParameter("sizes and errors must be positive and finite".into()));
    }
    let x: Vec<f64> = ns.iter().map(|n| -n.ln()).collect();
    let y: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let r_squared = if syy > 0.0 { (1.0 - sse / syy).clamp(0.0, 1.0) } else { 1.0 };
    let slope_stderr = (sse / (k - 2.0) / sxx).sqrt();
    Ok(RateFit {
        slope,
        intercept,
        r_squared,
        slope_stderr,
        ns: ns.to_vec(),
        errors: errors.to_vec(),
    })
}
