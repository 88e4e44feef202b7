//! Coupled self-convergence of the tamed scheme and supremum moments.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::euler::solve_path;
use super::model::SdeModel;
use super::taming::{tame_drift, TamingPolicy};
use crate::error::{Error, Result};
use crate::mc::estimate::{moment_estimate, rate_fit, MomentEstimate, RateFit};
use crate::mc::paths::PathEnsemble;
use crate::numeric::{mean, mean_stderr};

/// Pathwise sup errors of `X^n` against the reference for one coarse mesh.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeRun {
    pub n: usize,
    pub fine_steps: usize,
    pub reference_mesh: usize,
    pub seed: u64,
    pub sup_errors: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongErrorRow {
    pub n: usize,
    pub mean_sup_error: f64,
    pub stderr: f64,
    pub l2: f64,
    pub l4: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongErrorTable {
    pub model: String,
    pub taming: TamingPolicy,
    pub reference_mesh: usize,
    pub rows: Vec<StrongErrorRow>,
    /// Fit on the mean sup errors; absent when an error is zero.
    pub fit: Option<RateFit>,
    #[serde(skip)]
    pub runs: Vec<SchemeRun>,
}

impl StrongErrorTable {
    /// Meshes `n_{i+1}` whose mean error exceeds that at `n_i` by more than
    /// `k` combined standard errors.
    pub fn monotone_violations(&self, k: f64) -> Vec<usize> {
        self.rows
            .windows(2)
            .filter(|w| w[1].mean_sup_error > w[0].mean_sup_error + k * w[0].stderr.hypot(w[1].stderr))
            .map(|w| w[1].n)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,mean_sup_error,stderr,L2,L4\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{:e},{:e},{:e},{:e}", r.n, r.mean_sup_error, r.stderr, r.l2, r.l4);
        }
        out
    }
}

/// Strong error of the tamed scheme at each `n` against the same scheme at
/// mesh `fine_factor * max(ns)`, all driven by the ensemble's increments.
pub fn strong_error(
    model: &SdeModel,
    taming: &TamingPolicy,
    ns: &[usize],
    fine_factor: usize,
    ensemble: &PathEnsemble,
) -> Result<StrongErrorTable> {
    if ns.is_empty() || fine_factor == 0 {
        return Err(Error::InvalidParameter("need at least one mesh and fine_factor >= 1".into()));
    }
    if ensemble.dim != 1 {
        return Err(Error::InvalidParameter(format!("scalar schemes need dim = 1, got {}", ensemble.dim)));
    }
    let reference_mesh = fine_factor * ns.iter().max().copied().unwrap_or(1);
    let ref_spc = ensemble.steps_per_cell(reference_mesh)?;
    let ref_drift = tame_drift(&model.drift, reference_mesh, f64::INFINITY, taming)?;
    let coarse: Vec<_> = ns
        .iter()
        .map(|&n| Ok((ensemble.steps_per_cell(n)?, tame_drift(&model.drift, n, f64::INFINITY, taming)?)))
        .collect::<Result<_>>()?;
    let dt = ensemble.dt();
    // coarse and reference for one path share a task and one increment vector
    let per_path: Vec<Vec<f64>> = ensemble.par_map(|i| {
        let dw = ensemble.increments(i);
        let reference = solve_path(model, &ref_drift, ref_spc, dt, &dw);
        coarse
            .iter()
            .map(|(spc, drift)| {
                let x = solve_path(model, drift, *spc, dt, &dw);
                x.iter().zip(&reference).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(ns.len());
    let mut runs = Vec::with_capacity(ns.len());
    for (j, &n) in ns.iter().enumerate() {
        let errs: Vec<f64> = per_path.iter().map(|p| p[j]).collect();
        let (m, se) = mean_stderr(&errs);
        let sq: Vec<f64> = errs.iter().map(|e| e * e).collect();
        let q4: Vec<f64> = sq.iter().map(|e| e * e).collect();
        rows.push(StrongErrorRow { n, mean_sup_error: m, stderr: se, l2: mean(&sq).sqrt(), l4: mean(&q4).powf(0.25) });
        runs.push(SchemeRun { n, fine_steps: ensemble.n_steps, reference_mesh, seed: ensemble.seed, sup_errors: errs });
    }
    let nf: Vec<f64> = ns.iter().map(|n| *n as f64).collect();
    let means: Vec<f64> = rows.iter().map(|r| r.mean_sup_error).collect();
    let fit = if ns.len() >= 3 { rate_fit(&nf, &means).ok() } else { None };
    Ok(StrongErrorTable { model: model.id.clone(), taming: *taming, reference_mesh, rows, fit, runs })
}

/// `E sup_t |Y_t|^m` over trajectories sampled on a common grid.
pub fn sup_process_moment(trajectories: &[Vec<f64>], m: f64) -> Result<MomentEstimate> {
    if let Some(first) = trajectories.first() {
        if trajectories.iter().any(|t| t.len() != first.len()) {
            return Err(Error::Shape("trajectories on different grids".into()));
        }
    }
    let sups: Vec<f64> = trajectories.iter().map(|t| t.iter().fold(0.0_f64, |a, v| a.max(v.abs()))).collect();
    moment_estimate(&sups, m)
}

/// Ratios `E sup|V^n|^m / (121 N̂ ln(n+1) / n)^{m/2}` with `N̂` chosen so the
/// ratio is 1 at `n = fit_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DgpRatios {
    pub ns: Vec<usize>,
    pub n_hat: f64,
    pub ratios: Vec<f64>,
}

pub fn dgp_ratios(ns: &[usize], moments: &[f64], m: f64, fit_at: usize) -> Result<DgpRatios> {
    if ns.len() != moments.len() {
        return Err(Error::Shape(format!("{} meshes but {} moments", ns.len(), moments.len())));
    }
    let rate = |n: usize| 121.0 * ((n + 1) as f64).ln() / n as f64;
    let idx = ns
        .iter()
        .position(|n| *n == fit_at)
        .ok_or_else(|| Error::InvalidParameter(format!("fit mesh {fit_at} is not among the meshes")))?;
    if !(moments[idx] > 0.0) || !(m > 0.0) {
        return Err(Error::InvalidParameter("moment at the fit mesh and m must be positive".into()));
    }
    let n_hat = moments[idx].powf(2.0 / m) / rate(fit_at);
    let ratios = ns.iter().zip(moments).map(|(n, v)| v / (n_hat * rate(*n)).powf(m / 2.0)).collect();
    Ok(DgpRatios { ns: ns.to_vec(), n_hat, ratios })
}
