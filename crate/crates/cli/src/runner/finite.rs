//! Exact suites on randomized finite filtrations.

use std::path::Path;

use bmoforge::analysis::{
    appendix_suite, exponential_suite, jn_suite, structural_suite, summarize, write_jsonl, Case, CheckReport,
};
use bmoforge::filtration::corpus::{corpus, random_process, random_space, CorpusCase, ProcessFamily};
use bmoforge::filtration::AdaptedProcess;
use bmoforge::mc::rng::mix_seed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{write_csv, write_text, Outcome};
use crate::config::{JnCheckParams, Suite, VerifyFiniteParams};

#[derive(Serialize)]
struct ReportRow<'a> {
    case: Option<usize>,
    check: &'a str,
    lhs: f64,
    rhs: f64,
    ratio: f64,
    holds: bool,
}

fn finish(reports: Vec<CheckReport>, dir: &Path) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &reports)?;
    write_text(dir, "checks.jsonl", std::str::from_utf8(&buf)?, &mut out)?;
    let rows: Vec<ReportRow> = reports
        .iter()
        .map(|r| ReportRow { case: r.case, check: &r.check, lhs: r.lhs, rhs: r.rhs, ratio: r.ratio, holds: r.holds })
        .collect();
    write_csv(dir, "checks.csv", &rows, &mut out)?;
    let summary = summarize(&reports);
    write_csv(dir, "summary.csv", &summary, &mut out)?;
    out.summary = summary;
    let bad: Vec<CheckReport> = reports.into_iter().filter(|r| !r.holds).collect();
    out.violations = bad.len();
    if !bad.is_empty() {
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &bad)?;
        write_text(dir, "violations.jsonl", std::str::from_utf8(&buf)?, &mut out)?;
    }
    Ok(out)
}

fn run_cases(
    cases: &[CorpusCase],
    suite: impl Fn(&Case) -> bmoforge::Result<Vec<CheckReport>> + Sync,
) -> anyhow::Result<Vec<CheckReport>> {
    let per_case: Vec<Vec<CheckReport>> = cases
        .par_iter()
        .map(|c| suite(&Case { id: c.id, space: &c.space, process: &c.process }))
        .collect::<bmoforge::Result<_>>()?;
    Ok(per_case.into_iter().flatten().collect())
}

pub(crate) fn verify_finite(p: &VerifyFiniteParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let cases = corpus(seed, p.cases, p.max_depth);
    let appendix_seed = mix_seed(seed, 1);
    let reports = run_cases(&cases, |case| {
        let mut out = Vec::new();
        for suite in &p.suites {
            out.extend(match suite {
                Suite::Jn => jn_suite(case, &p.ps)?,
                Suite::Appendix => appendix_suite(case, appendix_seed)?,
                Suite::Structural => structural_suite(case)?,
                Suite::Exponential => exponential_suite(case)?,
            });
        }
        Ok(out)
    })?;
    finish(reports, dir)
}

fn family_corpus(seed: u64, n: usize, max_depth: usize, family: &str) -> Vec<CorpusCase> {
    if family == "all" {
        return corpus(seed, n, max_depth);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fam = ProcessFamily::ALL.into_iter().find(|f| f.name() == family);
    (0..n)
        .map(|id| {
            let depth = rng.random_range(1..=max_depth);
            let space = random_space(&mut rng, depth);
            let (family, process) = match fam {
                Some(f) => (f, random_process(&mut rng, &space, f)),
                None => {
                    let c = rng.random_range(-5.0..5.0);
                    (ProcessFamily::Deterministic, AdaptedProcess::constant(&space, c))
                }
            };
            CorpusCase { id, family, space, process }
        })
        .collect()
}

pub(crate) fn jn_check(p: &JnCheckParams, seed: u64, dir: &Path) -> anyhow::Result<Outcome> {
    let cases = family_corpus(seed, p.cases, p.max_depth, &p.family);
    let reports = run_cases(&cases, |case| jn_suite(case, &p.ps))?;
    finish(reports, dir)
}
