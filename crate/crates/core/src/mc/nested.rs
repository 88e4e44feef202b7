//! Nested Monte Carlo for conditional moduli of additive Brownian functionals
//! `K_t = ∫_0^t f(r, B_r) dr`.
//!
//! By the Markov property `E_s|K_t - K_s|` is the function
//! `x ↦ E|∫_s^t f(r, x + W_{r-s}) dr|` evaluated at `x = B_s`. Outer samples
//! draw `B_s`; inner paths restart Brownian motion from each sample.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{rate_fit, EssSupProxy, MomentEstimate, RateFit};
use super::rng::{mix_seed, StreamKey};
use crate::error::{Error, Result};
use crate::numeric::mean_stderr;

const OUTER_LABEL: u64 = 0x6f75_7465_72;
const INNER_LABEL: u64 = 0x696e_6e65_72;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NestedConfig {
    pub n_inner: usize,
    /// Fine time step of the inner Riemann sums.
    pub dt: f64,
    pub proxy: EssSupProxy,
    pub seed: u64,
}

fn steps_for(span: f64, dt: f64) -> Result<usize> {
    let k = span / dt;
    let r = k.round();
    if span < 0.0 || (k - r).abs() > 1e-6 {
        return Err(Error::InvalidParameter(format!(
            "time span {span} is not a multiple of dt = {dt}"
        )));
    }
    Ok(r as usize)
}

/// `n` samples of `B_s` for Brownian motion started at 0.
pub fn brownian_states(s: f64, n: usize, seed: u64) -> Vec<f64> {
    let key = StreamKey::new(seed).derive(OUTER_LABEL);
    (0..n)
        .map(|i| s.sqrt() * key.rng(i as u64).sample::<f64, _>(StandardNormal))
        .collect()
}

/// For every outer state and every end time in `ends` (increasing, `>= s`),
/// `(mean, stderr)` of `|∫_s^t f(r, X_r) dr|` over `n_inner` inner paths.
/// Result layout: `[end][outer]`.
pub fn conditional_abs_integrals<F>(
    f: &F,
    s: f64,
    ends: &[f64],
    outer: &[f64],
    cfg: &NestedConfig,
) -> Result<Vec<Vec<(f64, f64)>>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if cfg.n_inner == 0 || outer.is_empty() {
        return Err(Error::EmptySamples);
    }
    if !(cfg.dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt = {} must be > 0", cfg.dt)));
    }
    if ends.windows(2).any(|w| w[1] < w[0]) || ends.first().is_some_and(|t| *t < s) {
        return Err(Error::InvalidParameter("end times must be increasing and >= s".into()));
    }
    let marks: Vec<usize> = ends.iter().map(|t| steps_for(t - s, cfg.dt)).collect::<Result<_>>()?;
    let total = marks.last().copied().unwrap_or(0);
    let sd = cfg.dt.sqrt();
    let n_inner = cfg.n_inner;
    let key = StreamKey::new(cfg.seed).derive(INNER_LABEL);
    // one task per (outer, inner) pair; values[end] per task
    let per_task: Vec<Vec<f64>> = (0..outer.len() * n_inner)
        .into_par_iter()
        .map(|task| {
            let (i, j) = (task / n_inner, task % n_inner);
            let mut rng = key.derive(i as u64).rng(j as u64);
            let mut x = outer[i];
            let mut integral = 0.0_f64;
            let mut out = Vec::with_capacity(marks.len());
            let mut next = 0;
            for k in 0..=total {
                while next < marks.len() && marks[next] == k {
                    out.push(integral.abs());
                    next += 1;
                }
                if k == total {
                    break;
                }
                integral += f(s + k as f64 * cfg.dt, x) * cfg.dt;
                x += sd * rng.sample::<f64, _>(StandardNormal);
            }
            out
        })
        .collect();
    Ok((0..ends.len())
        .map(|e| {
            (0..outer.len())
                .map(|i| {
                    let vals: Vec<f64> = per_task[i * n_inner..(i + 1) * n_inner].iter().map(|v| v[e]).collect();
                    mean_stderr(&vals)
                })
                .collect()
        })
        .collect())
}

/// Ess-sup proxy over outer states of `E_s|∫_s^t f(r, X_r) dr|`.
pub fn markov_conditional_moment<F>(f: &F, s: f64, t: f64, outer: &[f64], cfg: &NestedConfig) -> Result<MomentEstimate>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if !(s < t) {
        return Err(Error::InvalidParameter(format!("need s < t, got s = {s}, t = {t}")));
    }
    let per = conditional_abs_integrals(f, s, &[t], outer, cfg)?;
    let (value, stderr) = cfg.proxy.apply(&per[0])?;
    Ok(MomentEstimate { value, stderr, n_outer: outer.len(), n_inner: cfg.n_inner })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalGrid {
    pub times: Vec<f64>,
    /// `rho[s][t]` for grid indices `s <= t`; zero on and below the diagonal.
    pub rho: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    /// `(u, v, s, t)` with `[u, v] ⊆ [s, t]` whose estimates break monotonicity
    /// by more than three combined standard errors.
    pub monotone_flags: Vec<(usize, usize, usize, usize)>,
}

impl EmpiricalGrid {
    /// Fit of `max_s ρ[s][s+h] ≈ c h^α` across widths `h`: the slope is `α`.
    pub fn alpha_fit(&self) -> Result<RateFit> {
        let n = self.times.len();
        let mut widths = Vec::new();
        let mut sups = Vec::new();
        for h in 1..n {
            let best = (0..n - h).map(|s| self.rho[s][s + h]).fold(0.0, f64::max);
            widths.push(1.0 / (self.times[h] - self.times[0]));
            sups.push(best);
        }
        rate_fit(&widths, &sups)
    }
}

/// Conditional-modulus proxies for every pair of `times` (increasing, uniform or not).
///
/// Outer states at `s > 0` are `n_outer` draws of `B_s`; at `s = 0` the state is 0.
pub fn empirical_rho_grid<F>(f: &F, times: &[f64], n_outer: usize, cfg: &NestedConfig) -> Result<EmpiricalGrid>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) || times[0] < 0.0 {
        return Err(Error::InvalidParameter("grid times must be increasing, nonnegative, at least two".into()));
    }
    let n = times.len();
    let mut rho = vec![vec![0.0; n]; n];
    let mut stderr = vec![vec![0.0; n]; n];
    for s in 0..n - 1 {
        let t0 = times[s];
        let outer = if t0 == 0.0 {
            vec![0.0]
        } else {
            brownian_states(t0, n_outer, mix_seed(cfg.seed, 2 * s as u64))
        };
        let sub = NestedConfig { seed: mix_seed(cfg.seed, 2 * s as u64 + 1), ..*cfg };
        let per = conditional_abs_integrals(f, t0, &times[s + 1..], &outer, &sub)?;
        for (k, by_outer) in per.iter().enumerate() {
            let (v, e) = cfg.proxy.apply(by_outer)?;
            rho[s][s + 1 + k] = v;
            stderr[s][s + 1 + k] = e;
        }
    }
    let mut monotone_flags = Vec::new();
    for s in 0..n {
        for t in s..n {
            for u in s..=t {
                for v in u..=t {
                    let slack = 3.0 * (stderr[u][v].powi(2) + stderr[s][t].powi(2)).sqrt();
                    if rho[u][v] > rho[s][t] + slack {
                        monotone_flags.push((u, v, s, t));
                    }
                }
            }
        }
    }
    Ok(EmpiricalGrid { times: times.to_vec(), rho, stderr, monotone_flags })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n_inner: usize) -> NestedConfig {
        NestedConfig { n_inner, dt: 1.0 / 64.0, proxy: EssSupProxy::Max, seed: 5 }
    }

    #[test]
    fn zero_and_unit_integrands() {
        let zero = |_: f64, _: f64| 0.0;
        let one = |_: f64, _: f64| 1.0;
        let outer = brownian_states(0.5, 4, 1);
        assert_eq!(markov_conditional_moment(&zero, 0.5, 1.0, &outer, &cfg(8)).unwrap().value, 0.0);
        let m = markov_conditional_moment(&one, 0.5, 1.0, &outer, &cfg(8)).unwrap();
        assert!((m.value - 0.5).abs() < 1e-12 && m.stderr == 0.0);
    }

    #[test]
    fn deterministic_grids() {
        let times: Vec<f64> = (0..5).map(|k| k as f64 / 4.0).collect();
        let g = empirical_rho_grid(&|_: f64, _: f64| 1.0, &times, 3, &cfg(4)).unwrap();
        for s in 0..5 {
            for t in s..5 {
                assert!((g.rho[s][t] - (times[t] - times[s])).abs() < 1e-12);
            }
        }
        assert!(g.monotone_flags.is_empty());
        let z = empirical_rho_grid(&|_: f64, _: f64| 0.0, &times, 3, &cfg(4)).unwrap();
        assert!(z.rho.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn rejects_misaligned_times() {
        let one = |_: f64, _: f64| 1.0;
        assert!(markov_conditional_moment(&one, 0.0, 0.3, &[0.0], &cfg(2)).is_err());
    }
}
