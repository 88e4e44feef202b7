//! Aggregation of run manifests into one table.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::bail;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentKind;
use crate::manifest::{RunManifest, MANIFEST_FILE};

/// One aggregated line: either a check (counts and worst ratio) or a pooled slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub kind: ExperimentKind,
    pub name: String,
    pub runs: usize,
    pub n: usize,
    pub violations: Option<usize>,
    pub worst_ratio: Option<f64>,
    pub slope: Option<f64>,
    pub stderr: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
}

/// Reads manifests (a manifest file or a run directory each) and checks
/// that every listed output exists.
pub fn load_manifests(paths: &[PathBuf]) -> anyhow::Result<Vec<RunManifest>> {
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let file = if p.is_dir() { p.join(MANIFEST_FILE) } else { p.clone() };
        let m = RunManifest::read(&file).map_err(|e| anyhow::anyhow!("{}: {e}", file.display()))?;
        let dir = file.parent().unwrap_or(Path::new("."));
        for o in &m.outputs {
            if !dir.join(o).is_file() {
                bail!("{}: output {o} is missing", file.display());
            }
        }
        out.push(m);
    }
    Ok(out)
}

/// Inverse-variance pooling. Estimates with zero standard error are exact and
/// dominate; their plain mean is returned with zero error.
pub fn pool(estimates: &[(f64, f64)]) -> Option<(f64, f64)> {
    if estimates.is_empty() {
        return None;
    }
    let exact: Vec<f64> = estimates.iter().filter(|e| e.1 == 0.0).map(|e| e.0).collect();
    if !exact.is_empty() {
        return Some((exact.iter().sum::<f64>() / exact.len() as f64, 0.0));
    }
    let w: f64 = estimates.iter().map(|e| 1.0 / (e.1 * e.1)).sum();
    let m = estimates.iter().map(|e| e.0 / (e.1 * e.1)).sum::<f64>() / w;
    Some((m, w.sqrt().recip()))
}

/// Per-check counts and pooled slopes, keyed and sorted by `(kind, name)`.
pub fn report_summary(manifests: &[RunManifest]) -> Vec<AggregateRow> {
    let mut checks: BTreeMap<(ExperimentKind, String), AggregateRow> = BTreeMap::new();
    let mut slopes: BTreeMap<(ExperimentKind, String), Vec<(f64, f64)>> = BTreeMap::new();
    for m in manifests {
        for s in &m.summary {
            let row = checks.entry((m.kind, s.check.clone())).or_insert_with(|| AggregateRow {
                kind: m.kind,
                name: s.check.clone(),
                runs: 0,
                n: 0,
                violations: Some(0),
                worst_ratio: Some(0.0),
                slope: None,
                stderr: None,
                ci_low: None,
                ci_high: None,
            });
            row.runs += 1;
            row.n += s.n_cases;
            row.violations = row.violations.map(|v| v + s.violations);
            row.worst_ratio = row.worst_ratio.map(|w| w.max(s.worst_ratio));
        }
        for s in &m.slopes {
            slopes.entry((m.kind, s.name.clone())).or_default().push((s.slope, s.stderr));
        }
    }
    let mut rows: Vec<AggregateRow> = checks.into_values().collect();
    for ((kind, name), est) in slopes {
        let (slope, se) = pool(&est).expect("nonempty");
        rows.push(AggregateRow {
            kind,
            name,
            runs: est.len(),
            n: est.len(),
            violations: None,
            worst_ratio: None,
            slope: Some(slope),
            stderr: Some(se),
            ci_low: Some(slope - 1.96 * se),
            ci_high: Some(slope + 1.96 * se),
        });
    }
    rows.sort_by(|a, b| (a.kind, &a.name).cmp(&(b.kind, &b.name)));
    rows
}

pub fn to_csv(rows: &[AggregateRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["kind", "name", "runs", "n", "violations", "worst_ratio", "slope", "stderr", "ci_low", "ci_high"])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn num(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"))
}

/// Fixed-width text table for terminals.
pub fn to_table(rows: &[AggregateRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<14} {:<28} {:>5} {:>8} {:>10} {:>11} {:>8} {:>8} {:>19}",
        "kind", "name", "runs", "n", "violations", "worst_ratio", "slope", "stderr", "95% ci"
    );
    for r in rows {
        let ci = match (r.ci_low, r.ci_high) {
            (Some(a), Some(b)) => format!("[{a:.3}, {b:.3}]"),
            _ => "-".into(),
        };
        let _ = writeln!(
            out,
            "{:<14} {:<28} {:>5} {:>8} {:>10} {:>11} {:>8} {:>8} {:>19}",
            r.kind.name(),
            r.name,
            r.runs,
            r.n,
            opt(&r.violations),
            num(r.worst_ratio),
            num(r.slope),
            num(r.stderr),
            ci
        );
    }
    out
}
