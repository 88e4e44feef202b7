//! Quadrature error `V^n_t = ∫_0^t [f(r, B_r) - f(r, B_{k_n(r)})] dr` of
//! mesh-point sampling, computed as a left-point sum on the fine grid.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mc::estimate::{rate_fit, EssSupProxy, RateFit};
use crate::mc::paths::{PathEnsemble, DEFAULT_MATERIALIZE_CAP};
use crate::mc::rng::StreamKey;
use crate::numeric::mean_stderr;

const OUTER_LABEL: u64 = 0x71_6f75_7465;
const INNER_LABEL: u64 = 0x71_696e_6e65;

/// Trajectory of `V^n` along one path given by its fine-grid values `b`.
pub fn quadrature_path<F>(f: &F, b: &[f64], dt: f64, steps_per_cell: usize) -> Vec<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let mut out = Vec::with_capacity(b.len());
    let mut v = 0.0;
    out.push(v);
    for k in 0..b.len() - 1 {
        let anchor = b[k - k % steps_per_cell];
        let t = k as f64 * dt;
        v += (f(t, b[k]) - f(t, anchor)) * dt;
        out.push(v);
    }
    out
}

/// Per-path trajectories of `V^n` on the fine grid.
pub fn quadrature_error<F>(f: &F, ensemble: &PathEnsemble, n: usize) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    check_scalar(ensemble)?;
    let requested = ensemble.n_paths as u128 * (ensemble.n_steps as u128 + 1);
    if requested > DEFAULT_MATERIALIZE_CAP {
        return Err(Error::ResourceCap { requested, cap: DEFAULT_MATERIALIZE_CAP });
    }
    let spc = ensemble.steps_per_cell(n)?;
    let dt = ensemble.dt();
    Ok(ensemble.par_map(|i| quadrature_path(f, &ensemble.path(i), dt, spc)))
}

/// Terminal value and pathwise supremum of `|V^n|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSummary {
    pub terminal: f64,
    pub sup: f64,
}

impl QuadratureSummary {
    pub fn of(trajectory: &[f64]) -> Self {
        Self {
            terminal: *trajectory.last().unwrap_or(&0.0),
            sup: trajectory.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// Summaries for several meshes on the same paths; layout `[mesh][path]`.
pub fn quadrature_summaries<F>(f: &F, ensemble: &PathEnsemble, ns: &[usize]) -> Result<Vec<Vec<QuadratureSummary>>>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    check_scalar(ensemble)?;
    let spcs: Vec<usize> = ns.iter().map(|n| ensemble.steps_per_cell(*n)).collect::<Result<_>>()?;
    let dt = ensemble.dt();
    let per_path: Vec<Vec<QuadratureSummary>> = ensemble.par_map(|i| {
        let b = ensemble.path(i);
        spcs.iter().map(|spc| QuadratureSummary::of(&quadrature_path(f, &b, dt, *spc))).collect()
    });
    Ok((0..ns.len()).map(|j| per_path.iter().map(|p| p[j]).collect()).collect())
}

fn check_scalar(ensemble: &PathEnsemble) -> Result<()> {
    if ensemble.dim != 1 {
        return Err(Error::InvalidParameter(format!("quadrature needs dim = 1, got {}", ensemble.dim)));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusProxyConfig {
    pub n_outer: usize,
    pub n_inner: usize,
    /// Fine steps on `[0, 1]`.
    pub n_steps: usize,
    pub proxy: EssSupProxy,
    pub seed: u64,
}

/// `max_s` over deterministic starts of the ess-sup proxy of `E_s|V^n_1 - V^n_s|`, per mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusProxy {
    pub ns: Vec<usize>,
    pub starts: Vec<f64>,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Start attaining the maximum, per mesh.
    pub argmax: Vec<f64>,
    pub fit: Option<RateFit>,
}

/// Nested estimate of the conditional modulus of `V^n` on windows `[s, 1]`.
///
/// Starts must be mesh points of every `n`, so the conditional law given
/// `F_s` depends on `B_s` alone. Outer states are draws of `B_s`; inner paths
/// restart from them and are shared across meshes.
pub fn quadrature_modulus_proxy<F>(f: &F, ns: &[usize], starts: &[f64], cfg: &ModulusProxyConfig) -> Result<ModulusProxy>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    if ns.is_empty() || starts.is_empty() || cfg.n_outer == 0 || cfg.n_inner == 0 {
        return Err(Error::EmptySamples);
    }
    let dt = 1.0 / cfg.n_steps as f64;
    let mut spcs = Vec::with_capacity(ns.len());
    for &n in ns {
        if n == 0 || cfg.n_steps % n != 0 {
            return Err(Error::MeshMismatch { fine: cfg.n_steps, coarse: n });
        }
        spcs.push(cfg.n_steps / n);
    }
    let mut first = Vec::with_capacity(starts.len());
    for &s in starts {
        let k = (s * cfg.n_steps as f64).round() as usize;
        let aligned = (s * cfg.n_steps as f64 - k as f64).abs() < 1e-9 && k < cfg.n_steps;
        if !(s >= 0.0) || !aligned || spcs.iter().any(|spc| k % spc != 0) {
            return Err(Error::InvalidParameter(format!("start {s} is not a point of every mesh")));
        }
        first.push(k);
    }
    let sd = dt.sqrt();
    let key = StreamKey::new(cfg.seed);
    let tasks: Vec<(usize, usize, usize)> = (0..starts.len())
        .flat_map(|a| (0..cfg.n_outer).flat_map(move |i| (0..cfg.n_inner).map(move |j| (a, i, j))))
        .collect();
    let per_task: Vec<Vec<f64>> = tasks
        .par_iter()
        .map(|&(a, i, j)| {
            let k0 = first[a];
            let x0 = if k0 == 0 {
                0.0
            } else {
                let z: f64 = key.derive(OUTER_LABEL).derive(a as u64).rng(i as u64).sample(StandardNormal);
                (k0 as f64 * dt).sqrt() * z
            };
            let mut rng = key.derive(INNER_LABEL).derive(a as u64).derive(i as u64).rng(j as u64);
            let mut x = x0;
            let mut anchors = vec![x0; spcs.len()];
            let mut acc = vec![0.0; spcs.len()];
            for k in k0..cfg.n_steps {
                let t = k as f64 * dt;
                let fx = f(t, x);
                for ((spc, anchor), v) in spcs.iter().zip(anchors.iter_mut()).zip(acc.iter_mut()) {
                    if k % spc == 0 {
                        *anchor = x;
                    }
                    *v += (fx - f(t, *anchor)) * dt;
                }
                x += sd * rng.sample::<f64, _>(StandardNormal);
            }
            acc.iter().map(|v| v.abs()).collect()
        })
        .collect();
    let block = cfg.n_outer * cfg.n_inner;
    let mut values = vec![f64::NEG_INFINITY; ns.len()];
    let mut stderr = vec![0.0; ns.len()];
    let mut argmax = vec![starts[0]; ns.len()];
    for (a, &s) in starts.iter().enumerate() {
        for m in 0..ns.len() {
            let outer: Vec<(f64, f64)> = (0..cfg.n_outer)
                .map(|i| {
                    let lo = a * block + i * cfg.n_inner;
                    let vals: Vec<f64> = per_task[lo..lo + cfg.n_inner].iter().map(|v| v[m]).collect();
                    mean_stderr(&vals)
                })
                .collect();
            let (v, e) = cfg.proxy.apply(&outer)?;
            if v > values[m] {
                values[m] = v;
                stderr[m] = e;
                argmax[m] = s;
            }
        }
    }
    let nf: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
    let fit = if ns.len() >= 3 { rate_fit(&nf, &values).ok() } else { None };
    Ok(ModulusProxy { ns: ns.to_vec(), starts: starts.to_vec(), values, stderr, argmax, fit })
}
