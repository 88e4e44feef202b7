use bmoforge::analysis::{appendix_suite, exponential_suite, jn_suite, structural_suite, summarize, Case, CheckReport};
use bmoforge::filtration::corpus::corpus;

fn run(suite: impl Fn(&Case) -> bmoforge::Result<Vec<CheckReport>>, n: usize, seed: u64) -> Vec<CheckReport> {
    let cases = corpus(seed, n, 4);
    let mut out = Vec::new();
    for c in &cases {
        let case = Case { id: c.id, space: &c.space, process: &c.process };
        out.extend(suite(&case).unwrap());
    }
    out
}

fn assert_clean(reports: &[CheckReport]) {
    assert!(!reports.is_empty());
    let bad: Vec<&CheckReport> = reports.iter().filter(|r| !r.holds).collect();
    for row in summarize(reports) {
        eprintln!("{row:?}");
    }
    assert!(bad.is_empty(), "{} violations, first: {:?}", bad.len(), bad[0]);
}

#[test]
fn jn_moments_hold_on_corpus() {
    assert_clean(&run(|c| jn_suite(c, &[1, 2, 3]), 200, 101));
}

#[test]
fn appendix_lemmas_hold_on_corpus() {
    assert_clean(&run(|c| appendix_suite(c, 7), 200, 102));
}

#[test]
fn structural_properties_hold_on_corpus() {
    assert_clean(&run(structural_suite, 200, 103));
}

#[test]
fn exponential_bounds_hold_on_corpus() {
    assert_clean(&run(exponential_suite, 200, 104));
}
