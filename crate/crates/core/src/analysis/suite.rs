//! Batteries of exact checks over one space/process pair.
//!
//! Parameters that the theorems leave free (levels, partitions, rates, the
//! auxiliary variables of the upcrossing lemma) are swept deterministically or
//! drawn from a generator seeded by `(seed, case id)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::checks::{
    control_checks, energy_check, energy_constant, exp_vmoa_check, garsia_check, jn_moment_check, jump_checks,
    khasminskii_cell_moduli, khasminskii_check, maximal_check, monotonicity_check, stopping_pair_check,
    triangle_check, v1_check, vcontrol_check,
};
use super::report::CheckReport;
use crate::error::Result;
use crate::filtration::{maximal_process, rho_exact, rho_grid, AdaptedProcess, FiniteFilteredSpace};
use crate::mc::rng::mix_seed;

/// Fractions of the largest admissible rate used by the exponential suites.
pub const RATE_FRACTIONS: [f64; 3] = [0.25, 0.5, 0.9];

#[derive(Debug, Clone, Copy)]
pub struct Case<'a> {
    pub id: usize,
    pub space: &'a FiniteFilteredSpace,
    pub process: &'a AdaptedProcess,
}

fn tag(case: &Case, reports: impl IntoIterator<Item = CheckReport>) -> Vec<CheckReport> {
    reports.into_iter().map(|r| r.for_case(case.id)).collect()
}

/// Moment John–Nirenberg check at every start level and every `p`.
pub fn jn_suite(case: &Case, ps: &[u32]) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for r in 0..=case.space.depth() {
        for &p in ps {
            out.push(jn_moment_check(case.space, case.process, r, p)?);
        }
    }
    Ok(tag(case, out))
}

/// The process itself when nondecreasing, otherwise its maximal process.
pub fn nondecreasing_version(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> AdaptedProcess {
    if v.is_nondecreasing(space) {
        v.clone()
    } else {
        maximal_process(space, v)
    }
}

/// Upcrossing and energy inequalities with hypotheses verified by enumeration.
///
/// Upcrossing: `U = ρ_{s,τ} + noise` (so domination holds), `Y = X_{s-} + e`
/// with `|e| <= α`. Energy: `A` from [`nondecreasing_version`], `c` the exact
/// smallest admissible constant and a 50% larger one.
pub fn appendix_suite(case: &Case, seed: u64) -> Result<Vec<CheckReport>> {
    let (space, v) = (case.space, case.process);
    let d = space.depth();
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, case.id as u64));
    let mut out = Vec::new();
    for s in 0..=d {
        let rho = rho_exact(space, v, s, d)?;
        let scale = rho.max(0.1);
        for a_mult in [0.5, 1.0, 2.0] {
            for b_mult in [0.5, 1.0, 2.0] {
                let alpha = a_mult * scale;
                let beta = b_mult * scale;
                let u: Vec<f64> = (0..space.width(d))
                    .map(|_| rho + rng.random_range(0.0..0.5) * scale)
                    .collect();
                let y: Vec<f64> = space
                    .nodes(s)
                    .map(|n| v.left_limit(space, n) + alpha * rng.random_range(-1.0..=1.0))
                    .collect();
                out.push(garsia_check(space, v, &u, &y, s, alpha, beta)?);
            }
        }
    }
    let a = nondecreasing_version(space, v);
    let (c, _) = energy_constant(space, &a)?;
    for s in 0..=d {
        for p in 1..=3 {
            for c in [c, 1.5 * c] {
                out.push(energy_check(space, &a, s, c, p)?);
            }
        }
    }
    Ok(tag(case, out))
}

/// Jumps and `κ`, stopping pairs vs deterministic pairs, maximal process,
/// monotonicity and triangle inequality of `ρ`, control properties, and the
/// pathwise 1-variation bound.
pub fn structural_suite(case: &Case) -> Result<Vec<CheckReport>> {
    let (space, v) = (case.space, case.process);
    let d = space.depth();
    let mut out: Vec<CheckReport> = jump_checks(space, v)?.into();
    for s in 0..=d {
        for t in s..=d {
            out.push(stopping_pair_check(space, v, s, t)?);
            out.extend(maximal_check(space, v, s, t)?);
        }
    }
    let grid = rho_grid(space, v)?;
    out.push(monotonicity_check(&grid.rho));
    out.push(triangle_check(&grid.rho));
    for p in [1.0, 2.0] {
        out.extend(control_checks(&grid.rho, p)?);
        out.push(vcontrol_check(space, v, p)?);
    }
    out.push(v1_check(space, v)?);
    Ok(tag(case, out))
}

/// Every partition of `[0, depth]` into grid cells, as cut lists.
pub fn all_partitions(depth: usize) -> Vec<Vec<usize>> {
    if depth == 0 {
        return vec![vec![0]];
    }
    let interior = depth - 1;
    (0u32..1 << interior)
        .map(|mask| {
            let mut cuts = vec![0];
            cuts.extend((1..depth).filter(|k| mask & (1 << (k - 1)) != 0));
            cuts.push(depth);
            cuts
        })
        .collect()
}

/// Khasminskii product bound on every partition and start level, and the
/// exponential bound for controlled processes, at rates `f / (11 ρ)`.
pub fn exponential_suite(case: &Case) -> Result<Vec<CheckReport>> {
    let (space, v) = (case.space, case.process);
    let d = space.depth();
    let a = nondecreasing_version(space, v);
    let mut out = Vec::new();
    for cuts in all_partitions(d) {
        let cells = khasminskii_cell_moduli(space, &a, 0, &cuts)?;
        let worst = cells.iter().copied().fold(0.0, f64::max);
        for f in RATE_FRACTIONS {
            let lambda = if worst > 0.0 { f / (11.0 * worst) } else { 1.0 };
            for r in 0..=d {
                out.push(khasminskii_check(space, &a, r, lambda, &cuts)?);
            }
        }
    }
    let rho = rho_exact(space, v, 0, d)?;
    for f in RATE_FRACTIONS {
        let lambda = if rho > 0.0 { f / (11.0 * rho) } else { 1.0 };
        for p in [1.0, 2.0] {
            out.push(exp_vmoa_check(space, v, lambda, p)?);
        }
    }
    Ok(tag(case, out))
}
