//! Check reports, their JSON-lines form and per-check summaries.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::filtration::NodeId;

/// Absolute slack granted to every exact comparison: `rhs * 1e-9 + 1e-12`.
pub fn tolerance(rhs: f64) -> f64 {
    if rhs.is_finite() {
        rhs.abs() * 1e-9 + 1e-12
    } else {
        0.0
    }
}

/// Where the worst ratio of a check was attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Atom { node: NodeId },
    Window { start: usize, end: usize },
    WindowAtom { start: usize, end: usize, node: NodeId },
    Triple { start: usize, mid: usize, end: usize },
    Path { leaf: usize, start: usize, end: usize },
    Partition { cuts: Vec<usize>, node: NodeId },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub case: Option<usize>,
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    /// `lhs / rhs`, with `0/0 = 0`.
    pub ratio: f64,
    pub witness: Option<Witness>,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, lhs: f64, rhs: f64, witness: Option<Witness>) -> Self {
        let tol = tolerance(rhs);
        Self {
            check: check.into(),
            case: None,
            holds: lhs <= rhs + tol,
            lhs,
            rhs,
            tolerance: tol,
            ratio: ratio(lhs, rhs),
            witness,
        }
    }

    /// Compares in log space; `lhs` and `rhs` are reported as `exp` of the logs.
    pub fn from_logs(check: impl Into<String>, log_lhs: f64, log_rhs: f64, witness: Option<Witness>) -> Self {
        let mut r = Self::new(check, log_lhs.exp(), log_rhs.exp(), witness);
        if !r.rhs.is_finite() || !r.lhs.is_finite() {
            r.holds = log_lhs <= log_rhs + 1e-9;
            r.ratio = (log_lhs - log_rhs).exp();
        }
        r
    }

    pub fn for_case(mut self, case: usize) -> Self {
        self.case = Some(case);
        self
    }

    /// A failing report if any, otherwise the largest ratio.
    pub fn worst(reports: impl IntoIterator<Item = CheckReport>) -> Option<CheckReport> {
        reports.into_iter().reduce(|a, b| if worse(&b, &a) { b } else { a })
    }
}

fn worse(a: &CheckReport, b: &CheckReport) -> bool {
    match (a.holds, b.holds) {
        (false, true) => true,
        (true, false) => false,
        _ => a.ratio > b.ratio,
    }
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

pub fn write_jsonl<W: Write>(mut out: W, reports: &[CheckReport]) -> std::io::Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl(text: &str) -> serde_json::Result<Vec<CheckReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub check: String,
    pub n_cases: usize,
    pub violations: usize,
    pub worst_ratio: f64,
}

/// One row per check name, sorted by name.
pub fn summarize(reports: &[CheckReport]) -> Vec<SummaryRow> {
    let mut rows: BTreeMap<&str, SummaryRow> = BTreeMap::new();
    for r in reports {
        let row = rows.entry(&r.check).or_insert_with(|| SummaryRow {
            check: r.check.clone(),
            n_cases: 0,
            violations: 0,
            worst_ratio: 0.0,
        });
        row.n_cases += 1;
        row.violations += usize::from(!r.holds);
        row.worst_ratio = row.worst_ratio.max(r.ratio);
    }
    rows.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_iff_within_tolerance() {
        assert!(CheckReport::new("x", 1.0 + 5e-10, 1.0, None).holds);
        assert!(!CheckReport::new("x", 1.0 + 5e-9, 1.0, None).holds);
        assert!(CheckReport::new("x", 0.0, 0.0, None).holds);
        assert!(CheckReport::new("x", 1e300, f64::INFINITY, None).holds);
    }

    #[test]
    fn worst_prefers_failures() {
        let a = CheckReport::new("x", 0.9, 1.0, None);
        let b = CheckReport::new("x", 2.0, 1.0, None);
        let c = CheckReport::new("x", 0.1, 1.0, None);
        assert_eq!(CheckReport::worst([a, b.clone(), c]).unwrap(), b);
    }

    #[test]
    fn jsonl_roundtrip_and_summary() {
        let reports = vec![
            CheckReport::new("a", 1.0, 2.0, Some(Witness::Atom { node: NodeId::new(1, 0) })).for_case(3),
            CheckReport::new("a", 3.0, 2.0, None),
            CheckReport::new("b", 0.0, 0.0, Some(Witness::Window { start: 0, end: 2 })),
        ];
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &reports).unwrap();
        let back = read_jsonl(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, reports);
        let rows = summarize(&reports);
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].n_cases, rows[0].violations, rows[0].worst_ratio), (2, 1, 1.5));
    }
}
