//! Runs one experiment, writes its outputs and manifest.

mod finite;
mod stochastic;

use std::path::Path;

use anyhow::Context;
use bmoforge::analysis::SummaryRow;
use serde::Serialize;

use crate::config::{ExperimentConfig, Params};
use crate::manifest::{config_hash, now, BandResult, RunManifest, SlopeRecord, TOOL_VERSION};

/// What an experiment produced, before it is stamped into a manifest.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    pub outputs: Vec<String>,
    pub violations: usize,
    pub summary: Vec<SummaryRow>,
    pub slopes: Vec<SlopeRecord>,
    pub bands: Vec<BandResult>,
    pub assertions: Vec<String>,
}

pub(crate) fn write_csv<T: Serialize>(dir: &Path, name: &str, rows: &[T], out: &mut Outcome) -> anyhow::Result<()> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).with_context(|| format!("creating {}", path.display()))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    out.outputs.push(name.to_string());
    Ok(())
}

pub(crate) fn write_text(dir: &Path, name: &str, text: &str, out: &mut Outcome) -> anyhow::Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    out.outputs.push(name.to_string());
    Ok(())
}

/// Runs `config` into `dir` (created if missing) and writes `manifest.json` there.
pub fn run_experiment(config: &ExperimentConfig, dir: &Path) -> anyhow::Result<RunManifest> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let started = now();
    let seed = config.seed;
    let outcome = match &config.params {
        Params::VerifyFinite(p) => finite::verify_finite(p, seed, dir)?,
        Params::JnCheck(p) => finite::jn_check(p, seed, dir)?,
        Params::RhoGrid(p) => stochastic::rho_grid(p, seed, dir)?,
        Params::Davie(p) => stochastic::davie(p, seed, dir)?,
        Params::Quadrature(p) => stochastic::quadrature(p, seed, dir)?,
        Params::TamedEm(p) => stochastic::tamed_em(p, seed, dir)?,
    };
    let passed = outcome.violations == 0 && outcome.bands.iter().all(|b| b.met);
    let manifest = RunManifest {
        kind: config.kind,
        config_hash: config_hash(config),
        tool_version: TOOL_VERSION.to_string(),
        seed,
        started,
        finished: now(),
        outputs: outcome.outputs,
        violations: outcome.violations,
        summary: outcome.summary,
        slopes: outcome.slopes,
        bands: outcome.bands,
        assertions: outcome.assertions,
        passed,
        config: config.to_value(),
    };
    manifest.write(dir)?;
    Ok(manifest)
}
