//! The Davie functional `D = ∫_0^1 [g(t, B_t + x) - g(t, B_t)] dt`.

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::estimate::{moment_estimate, rate_fit, MomentEstimate, RateFit};
use crate::mc::paths::PathEnsemble;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DavieMode {
    /// `g` is clipped to `[-1, 1]`, with a warning when clipping happens.
    #[default]
    Bounded,
    /// `g` is used as given.
    Unchecked,
}

/// Samples of `D` for every shift on the same paths; layout `[shift][path]`.
/// The integral is a left-point sum over the ensemble horizon.
pub fn davie_samples<G>(g: &G, shifts: &[f64], ensemble: &PathEnsemble, mode: DavieMode) -> Result<Vec<Vec<f64>>>
where
    G: Fn(f64, f64) -> f64 + Sync,
{
    if ensemble.dim != 1 {
        return Err(Error::InvalidParameter(format!("Davie functional needs dim = 1, got {}", ensemble.dim)));
    }
    if shifts.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("shifts must be finite".into()));
    }
    let clipped = AtomicUsize::new(0);
    let eval = |t: f64, y: f64| -> f64 {
        let v = g(t, y);
        match mode {
            DavieMode::Unchecked => v,
            DavieMode::Bounded if v.abs() > 1.0 => {
                clipped.fetch_add(1, Ordering::Relaxed);
                v.clamp(-1.0, 1.0)
            }
            DavieMode::Bounded => v,
        }
    };
    let dt = ensemble.dt();
    let per_path: Vec<Vec<f64>> = ensemble.par_map(|i| {
        let b = ensemble.path(i);
        let mut d = vec![0.0; shifts.len()];
        for (k, y) in b[..b.len() - 1].iter().enumerate() {
            let t = k as f64 * dt;
            let base = eval(t, *y);
            for (dj, x) in d.iter_mut().zip(shifts) {
                *dj += (eval(t, y + x) - base) * dt;
            }
        }
        d
    });
    let hits = clipped.load(Ordering::Relaxed);
    if hits > 0 {
        log::warn!("Davie integrand exceeded 1 in magnitude at {hits} evaluations; clipped to [-1, 1]");
    }
    Ok((0..shifts.len()).map(|j| per_path.iter().map(|p| p[j]).collect()).collect())
}

/// Samples of `D` for a single shift.
pub fn davie_functional<G>(g: &G, x: f64, ensemble: &PathEnsemble) -> Result<Vec<f64>>
where
    G: Fn(f64, f64) -> f64 + Sync,
{
    Ok(davie_samples(g, &[x], ensemble, DavieMode::Bounded)?.remove(0))
}

/// Second and fourth moments per shift and the scaling diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DavieMoments {
    pub shifts: Vec<f64>,
    pub m2: Vec<MomentEstimate>,
    pub m4: Vec<MomentEstimate>,
    /// Fit of `ln E D² ≈ c + slope · ln|x|`.
    pub slope: Option<RateFit>,
    /// `E D⁴ / (Γ(3) (E D² / Γ(2))²)` per shift.
    pub gamma_ratio: Vec<f64>,
}

pub fn davie_moments(shifts: &[f64], samples: &[Vec<f64>]) -> Result<DavieMoments> {
    if shifts.len() != samples.len() {
        return Err(Error::Shape(format!("{} shifts but {} sample sets", shifts.len(), samples.len())));
    }
    let m2: Vec<MomentEstimate> = samples.iter().map(|s| moment_estimate(s, 2.0)).collect::<Result<_>>()?;
    let m4: Vec<MomentEstimate> = samples.iter().map(|s| moment_estimate(s, 4.0)).collect::<Result<_>>()?;
    let gamma_ratio = m2.iter().zip(&m4).map(|(a, b)| b.value / (2.0 * a.value * a.value)).collect();
    // rate_fit regresses on ln(1/n); feeding n = 1/|x| makes the slope the power of |x|
    let inv: Vec<f64> = shifts.iter().map(|x| 1.0 / x.abs()).collect();
    let second: Vec<f64> = m2.iter().map(|m| m.value).collect();
    let slope = if shifts.len() >= 3 { rate_fit(&inv, &second).ok() } else { None };
    Ok(DavieMoments { shifts: shifts.to_vec(), m2, m4, slope, gamma_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::paths::brownian_paths;
    use crate::schemes::model::sign0;

    #[test]
    fn constant_integrand_gives_zero() {
        let e = brownian_paths(4, 100, 1, 1.0, 1).unwrap();
        let d = davie_functional(&|_: f64, _: f64| 0.7, 0.3, &e).unwrap();
        assert!(d.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn identity_integrand_cancels_to_the_shift() {
        let e = brownian_paths(4, 100, 1, 1.0, 1).unwrap();
        let d = davie_samples(&|_: f64, y: f64| y, &[0.25, -2.0], &e, DavieMode::Unchecked).unwrap();
        assert!(d[0].iter().all(|v| (v - 0.25).abs() < 1e-12));
        assert!(d[1].iter().all(|v| (v + 2.0).abs() < 1e-12));
    }

    #[test]
    fn bounded_samples_stay_in_range() {
        let e = brownian_paths(50, 100, 1, 1.0, 5).unwrap();
        let d = davie_samples(&|_: f64, y: f64| 3.0 * sign0(y), &[0.5, 5.0], &e, DavieMode::Bounded).unwrap();
        assert!(d.iter().flatten().all(|v| v.abs() <= 2.0 + 1e-12));
        let m = davie_moments(&[0.5, 5.0], &d).unwrap();
        assert!(m.slope.is_none() && m.m2[0].value <= m.m2[1].value);
    }
}
