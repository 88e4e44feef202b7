//! Monte Carlo experiments: conditional moduli, Davie moments, quadrature
//! errors and tamed Euler–Maruyama self-convergence.

use std::path::Path;

use bmoforge::analysis::SummaryRow;
use bmoforge::mc::rng::mix_seed;
use bmoforge::mc::{brownian_paths, empirical_rho_grid, moment_estimate, rate_fit, NestedConfig};
use bmoforge::schemes::{
    davie_moments, davie_samples, dgp_ratios, quadrature_modulus_proxy, quadrature_summaries, strong_error, DavieMode,
    ModelId, ModulusProxyConfig, SdeModel,
};
use serde::Serialize;

use super::{write_csv, write_text, Outcome};
use crate::config::{DavieParams, QuadratureCheck, QuadratureParams, RhoGridParams, TamedEmParams};
use crate::manifest::{BandResult, SlopeRecord};

fn slope(name: &str, fit: &bmoforge::mc::RateFit) -> SlopeRecord {
    SlopeRecord { name: name.to_string(), slope: fit.slope, stderr: fit.slope_stderr }
}

#[derive(Serialize)]
struct GridRow {
    s: f64,
    t: f64,
    rho: f64,
    stderr: f64,
}

pub(crate) fn rho_grid(p: &RhoGridParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let times: Vec<f64> = (0..p.times).map(|k| k as f64 / (p.times - 1) as f64).collect();
    let cfg = NestedConfig { n_inner: p.n_inner, dt: 1.0 / p.fine_steps as f64, proxy: p.proxy, seed };
    let f = p.integrand;
    let grid = empirical_rho_grid(&|t: f64, x: f64| f.eval(t, x), &times, p.n_outer, &cfg)?;
    let mut rows = Vec::new();
    for s in 0..times.len() {
        for t in s + 1..times.len() {
            rows.push(GridRow { s: times[s], t: times[t], rho: grid.rho[s][t], stderr: grid.stderr[s][t] });
        }
    }
    write_csv(dir, "rho_grid.csv", &rows, &mut out)?;
    let n_pairs = times.len() * (times.len() + 1) / 2;
    out.summary.push(SummaryRow {
        check: "rho-monotone".into(),
        n_cases: n_pairs,
        violations: grid.monotone_flags.len(),
        worst_ratio: 0.0,
    });
    out.violations = grid.monotone_flags.len();
    if let Ok(fit) = grid.alpha_fit() {
        out.slopes.push(slope("alpha", &fit));
    }
    Ok(out)
}

#[derive(Serialize)]
struct DavieRow {
    shift: f64,
    m2: f64,
    m2_stderr: f64,
    m4: f64,
    m4_stderr: f64,
    gamma_ratio: f64,
}

pub(crate) fn davie(p: &DavieParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let e = brownian_paths(p.paths, p.steps, 1, 1.0, seed)?;
    let samples = davie_samples(&|_: f64, y: f64| bmoforge::schemes::sign0(y), &p.shifts, &e, DavieMode::Bounded)?;
    let m = davie_moments(&p.shifts, &samples)?;
    let rows: Vec<DavieRow> = (0..p.shifts.len())
        .map(|i| DavieRow {
            shift: p.shifts[i],
            m2: m.m2[i].value,
            m2_stderr: m.m2[i].stderr,
            m4: m.m4[i].value,
            m4_stderr: m.m4[i].stderr,
            gamma_ratio: m.gamma_ratio[i],
        })
        .collect();
    write_csv(dir, "davie.csv", &rows, &mut out)?;
    if let Some(fit) = &m.slope {
        out.slopes.push(slope("m2-shift-exponent", fit));
        out.bands.push(BandResult::new("m2-shift-exponent", fit.slope, p.slope_band[0], p.slope_band[1]));
    }
    for (x, r) in p.shifts.iter().zip(&m.gamma_ratio) {
        out.bands.push(BandResult::new(format!("gamma-ratio x={x}"), *r, p.gamma_band[0], p.gamma_band[1]));
    }
    Ok(out)
}

#[derive(Serialize)]
struct QuadratureRow {
    n: usize,
    mean_sq_terminal: f64,
    stderr_sq_terminal: f64,
    mean_abs_terminal: f64,
    stderr_abs_terminal: f64,
    mean_sq_sup: f64,
    stderr_sq_sup: f64,
    dgp_ratio: Option<f64>,
}

#[derive(Serialize)]
struct ModulusRow {
    n: usize,
    value: f64,
    stderr: f64,
    argmax_start: f64,
}

pub(crate) fn quadrature(p: &QuadratureParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let f = p.integrand;
    let integrand = |t: f64, x: f64| f.eval(t, x);
    let e = brownian_paths(p.paths, p.steps, 1, 1.0, mix_seed(seed, 0))?;
    let summaries = quadrature_summaries(&integrand, &e, &p.ns)?;
    let mut rows = Vec::new();
    let mut sup2 = Vec::new();
    for (n, per_path) in p.ns.iter().zip(&summaries) {
        let terminal: Vec<f64> = per_path.iter().map(|s| s.terminal).collect();
        let sups: Vec<f64> = per_path.iter().map(|s| s.sup).collect();
        let sq = moment_estimate(&terminal, 2.0)?;
        let ab = moment_estimate(&terminal, 1.0)?;
        let su = moment_estimate(&sups, 2.0)?;
        sup2.push(su.value);
        rows.push(QuadratureRow {
            n: *n,
            mean_sq_terminal: sq.value,
            stderr_sq_terminal: sq.stderr,
            mean_abs_terminal: ab.value,
            stderr_abs_terminal: ab.stderr,
            mean_sq_sup: su.value,
            stderr_sq_sup: su.stderr,
            dgp_ratio: None,
        });
        if p.check == QuadratureCheck::Variance {
            let target = 1.0 / (3.0 * (n * n) as f64);
            let slack = 3.0 * sq.stderr;
            out.bands.push(BandResult::new(format!("variance n={n}"), sq.value, target - slack, target + slack));
        }
    }
    if p.ns.contains(&8) && sup2.iter().all(|v| *v > 0.0) {
        let ratios = dgp_ratios(&p.ns, &sup2, 2.0, 8)?;
        for (row, r) in rows.iter_mut().zip(ratios.ratios) {
            row.dgp_ratio = Some(r);
        }
    }
    write_csv(dir, "quadrature.csv", &rows, &mut out)?;
    let nf: Vec<f64> = p.ns.iter().map(|n| *n as f64).collect();
    let l2: Vec<f64> = rows.iter().map(|r| r.mean_sq_terminal.sqrt()).collect();
    if p.ns.len() >= 3 {
        if let Ok(fit) = rate_fit(&nf, &l2) {
            out.slopes.push(slope("l2-terminal", &fit));
        }
    }
    if p.check == QuadratureCheck::Modulus {
        let cfg = ModulusProxyConfig {
            n_outer: p.n_outer,
            n_inner: p.n_inner,
            n_steps: p.steps,
            proxy: p.proxy,
            seed: mix_seed(seed, 1),
        };
        let m = quadrature_modulus_proxy(&integrand, &p.ns, &p.starts, &cfg)?;
        let mrows: Vec<ModulusRow> = (0..p.ns.len())
            .map(|i| ModulusRow { n: p.ns[i], value: m.values[i], stderr: m.stderr[i], argmax_start: m.argmax[i] })
            .collect();
        write_csv(dir, "modulus.csv", &mrows, &mut out)?;
        match &m.fit {
            Some(fit) => {
                out.slopes.push(slope("modulus-exponent", fit));
                out.bands.push(BandResult::new("modulus-exponent", fit.slope, p.exponent_band[0], p.exponent_band[1]));
            }
            None => out.bands.push(BandResult::new("modulus-exponent", f64::NAN, p.exponent_band[0], p.exponent_band[1])),
        }
    }
    Ok(out)
}

pub(crate) fn tamed_em(p: &TamedEmParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let model = SdeModel::preset(p.model);
    let fine = p.fine_factor * p.ns.iter().max().copied().unwrap_or(1);
    let e = brownian_paths(p.paths, fine, 1, 1.0, seed)?;
    let table = strong_error(&model, &p.taming, &p.ns, p.fine_factor, &e)?;
    write_text(dir, "strong_error.csv", &table.to_csv(), &mut out)?;
    let rises = table.monotone_violations(p.monotone_k);
    out.summary.push(SummaryRow {
        check: "error-monotone".into(),
        n_cases: p.ns.len().saturating_sub(1),
        violations: rises.len(),
        worst_ratio: 0.0,
    });
    out.violations = rises.len();
    if p.model == ModelId::Zero {
        let worst = table.rows.iter().map(|r| r.mean_sup_error).fold(0.0, f64::max);
        out.bands.push(BandResult::new("zero-drift-error", worst, 0.0, 0.0));
    } else if let Some(fit) = &table.fit {
        out.slopes.push(slope("strong-rate", fit));
        out.bands.push(BandResult::new("strong-rate", fit.slope, p.min_slope, f64::INFINITY));
    }
    match model.ellipticity(4.0, 10.0, 1000, seed) {
        Ok((lo, hi)) => out.assertions.push(format!("ellipticity sampled: sigma^2 in [{lo}, {hi}]")),
        Err(e) => out.assertions.push(format!("ellipticity not satisfied: {e}")),
    }
    out.assertions.push("weak differentiability and integrability of grad sigma assumed, not checked".into());
    Ok(out)
}
