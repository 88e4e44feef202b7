//! Exact inequality checkers on finite filtered spaces.
//!
//! Every `*_check` returns the worst case it found as a [`CheckReport`]; the
//! inequalities are theorems, so `holds == false` on valid input is a bug.

use serde::{Deserialize, Serialize};

use super::bounds::{exp_vmoa_log2_bound, jn_moment_bound, khasminskii_product, vmo_moment_bound, JN_CONSTANT};
use super::control::pvar_control;
use super::report::{tolerance, CheckReport, Witness};
use crate::error::{Error, Result};
use crate::filtration::modulus::{
    deterministic_pair_modulus, max_path_jump, node_modulus, window_max_jump, Method,
};
use crate::filtration::stopping::{check_feasible, enumerate_stopping_times, DEFAULT_ENUMERATION_CAP};
use crate::filtration::{
    kappa_exact, maximal_process, rho_exact, rho_grid, rho_restarted, AdaptedProcess, FiniteFilteredSpace, NodeId,
    StoppingTime,
};
use crate::numeric::{log_weighted_sum_exp, pairwise_sum};

/// `E_ν f(leaf)` over the leaves below `node`.
fn atom_mean(space: &FiniteFilteredSpace, node: NodeId, f: impl Fn(usize) -> f64) -> f64 {
    let d = space.depth();
    let terms: Vec<f64> = space
        .descendants(node, d)
        .map(|leaf| space.cond_prob(node, NodeId::new(d, leaf)) * f(leaf))
        .collect();
    pairwise_sum(&terms)
}

/// `ln E_ν exp(g(leaf))`.
fn atom_log_mean_exp(space: &FiniteFilteredSpace, node: NodeId, g: impl Fn(usize) -> f64) -> f64 {
    let d = space.depth();
    let (w, a): (Vec<f64>, Vec<f64>) = space
        .descendants(node, d)
        .map(|leaf| (space.cond_prob(node, NodeId::new(d, leaf)), g(leaf)))
        .unzip();
    log_weighted_sum_exp(&w, &a)
}

fn paths(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> Vec<Vec<f64>> {
    (0..space.width(space.depth())).map(|leaf| v.path(space, leaf)).collect()
}

/// Largest value of `per_atom` over the level-`level` atoms, with its atom.
fn max_over_level(space: &FiniteFilteredSpace, level: usize, per_atom: impl Fn(NodeId) -> f64) -> (f64, NodeId) {
    space
        .nodes(level)
        .map(|n| (per_atom(n), n))
        .fold((f64::NEG_INFINITY, NodeId::new(level, 0)), |a, b| if b.0 > a.0 { b } else { a })
}

fn require_nondecreasing(space: &FiniteFilteredSpace, a: &AdaptedProcess) -> Result<()> {
    match a.first_decrease(space) {
        Some(node) => Err(Error::NotNondecreasing(format!(
            "decreases into atom ({}, {})",
            node.level, node.index
        ))),
        None => Ok(()),
    }
}

/// `ess sup E_r max_{r<=k<=τ} |V_k - V_r|^p  <=  p! (11 ρ_{r,τ})^p`.
pub fn jn_moment_check(space: &FiniteFilteredSpace, v: &AdaptedProcess, r: usize, p: u32) -> Result<CheckReport> {
    space.check_level(r)?;
    let d = space.depth();
    let rhs = jn_moment_bound(rho_exact(space, v, r, d)?, p)?;
    let paths = paths(space, v);
    let (lhs, node) = max_over_level(space, r, |node| {
        atom_mean(space, node, |leaf| {
            let path = &paths[leaf];
            path[r..].iter().map(|x| (x - path[r]).abs()).fold(0.0, f64::max).powi(p as i32)
        })
    });
    Ok(CheckReport::new(format!("jn-moment-p{p}"), lhs, rhs, Some(Witness::Atom { node })))
}

fn validate_partition(space: &FiniteFilteredSpace, cuts: &[usize]) -> Result<()> {
    let d = space.depth();
    let ok = cuts.first() == Some(&0)
        && cuts.last() == Some(&d)
        && cuts.windows(2).all(|w| w[0] < w[1])
        && (d == 0 || cuts.len() >= 2);
    if !ok {
        return Err(Error::InvalidParameter(format!(
            "partition {cuts:?} must increase strictly from 0 to {d}"
        )));
    }
    Ok(())
}

/// Moduli of the restarted process on the partition cells that end after `r`,
/// each cell clipped to start no earlier than `r`.
pub fn khasminskii_cell_moduli(space: &FiniteFilteredSpace, a: &AdaptedProcess, r: usize, cuts: &[usize]) -> Result<Vec<f64>> {
    validate_partition(space, cuts)?;
    cuts.windows(2)
        .filter(|w| w[1] > r)
        .map(|w| rho_restarted(space, a, w[0].max(r), w[1]))
        .collect()
}

/// `ess sup E_r e^{λ (A_τ - A_r)}  <=  ∏ (1 - λ ρ_cell)^{-1}` for nondecreasing `A`.
///
/// Each cell uses the modulus of `A` restarted at the cell start: increments
/// over a cell never include the jump at its left endpoint.
pub fn khasminskii_check(
    space: &FiniteFilteredSpace,
    a: &AdaptedProcess,
    r: usize,
    lambda: f64,
    cuts: &[usize],
) -> Result<CheckReport> {
    space.check_level(r)?;
    require_nondecreasing(space, a)?;
    let rhos = khasminskii_cell_moduli(space, a, r, cuts)?;
    let rhs = khasminskii_product(lambda, &rhos)?;
    let d = space.depth();
    let terminal = a.level(d);
    let (log_lhs, node) = max_over_level(space, r, |node| {
        let ar = a.value(node);
        atom_log_mean_exp(space, node, |leaf| lambda * (terminal[leaf] - ar))
    });
    Ok(CheckReport::from_logs(
        "khasminskii",
        log_lhs,
        rhs.ln(),
        Some(Witness::Partition { cuts: cuts.to_vec(), node }),
    ))
}

/// Two reports: `ρ_{s,t}(V*) <= 11 ρ_{s,t}(V)` and
/// `ess sup E_s max_{s<=k<=t} |V_k - V_{s-}| <= 4 ρ_{s,t}(V)`.
pub fn maximal_check(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<[CheckReport; 2]> {
    let rho = rho_exact(space, v, s, t)?;
    let star = maximal_process(space, v);
    let rho_star = rho_exact(space, &star, s, t)?;
    let first = CheckReport::new(
        "maximal-rho",
        rho_star,
        JN_CONSTANT * rho,
        Some(Witness::Window { start: s, end: t }),
    );
    let paths = paths(space, v);
    let (lhs, node) = max_over_level(space, s, |node| {
        let left = v.left_limit(space, node);
        atom_mean(space, node, |leaf| {
            paths[leaf][s..=t].iter().map(|x| (x - left).abs()).fold(0.0, f64::max)
        })
    });
    let second = CheckReport::new(
        "maximal-4rho",
        lhs,
        4.0 * rho,
        Some(Witness::WindowAtom { start: s, end: t, node }),
    );
    Ok([first, second])
}

/// Verifies `E_S |X_T - X_{S-}| <= E_S U` for every stopping pair `s <= S <= T <= τ`,
/// naming the atom and convention of the first violation.
pub fn garsia_domination(space: &FiniteFilteredSpace, x: &AdaptedProcess, u: &[f64], s: usize) -> Result<()> {
    let d = space.depth();
    check_feasible(space, s, d, DEFAULT_ENUMERATION_CAP)?;
    for level in s..=d {
        let eu = space.cond_expectation(u, level)?;
        for node in space.nodes(level) {
            let bound = eu[node.index];
            let (grid, intra) = node_modulus(space, x, node, d, x.left_limit(space, node), Method::Enumeration);
            for (value, label) in [(Some(grid), "S at the grid time"), (intra, "S inside the following interval")] {
                if let Some(value) = value {
                    if value > bound + tolerance(bound) {
                        return Err(Error::Hypothesis(format!(
                            "domination fails for {label} on atom ({}, {}): sup_T E_S|X_T - X_S-| = {value} > E_S U = {bound}",
                            node.level, node.index
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `β P_s(X* >= α + β) <= E_s(U 1{X* >= α})` with `X* = max_{s<=k<=τ} |X_k - Y|`.
///
/// Requires the domination hypothesis and, in addition, `|X_{s-} - Y| <= α` on
/// every level-`s` atom: without it a constant process with `U = 0` and `Y` far
/// from `X` is a counterexample.
pub fn garsia_check(
    space: &FiniteFilteredSpace,
    x: &AdaptedProcess,
    u: &[f64],
    y: &[f64],
    s: usize,
    alpha: f64,
    beta: f64,
) -> Result<CheckReport> {
    space.check_level(s)?;
    let d = space.depth();
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha}, beta = {beta} must be > 0")));
    }
    if u.len() != space.width(d) || u.iter().any(|v| !(*v >= 0.0)) {
        return Err(Error::InvalidParameter("U must be a nonnegative value per leaf".into()));
    }
    if y.len() != space.width(s) {
        return Err(Error::Shape(format!("Y needs {} level-{s} values, got {}", space.width(s), y.len())));
    }
    for node in space.nodes(s) {
        let gap = (x.left_limit(space, node) - y[node.index]).abs();
        if gap > alpha + tolerance(alpha) {
            return Err(Error::Hypothesis(format!(
                "|X_s- - Y| = {gap} exceeds alpha = {alpha} on atom ({}, {})",
                node.level, node.index
            )));
        }
    }
    garsia_domination(space, x, u, s)?;
    let paths = paths(space, x);
    let span = space.branching().pow((d - s) as u32);
    let star: Vec<f64> = (0..paths.len())
        .map(|leaf| {
            let yv = y[leaf / span];
            paths[leaf][s..].iter().map(|v| (v - yv).abs()).fold(0.0, f64::max)
        })
        .collect();
    let reports = space.nodes(s).map(|node| {
        let lhs = beta * atom_mean(space, node, |leaf| f64::from(u8::from(star[leaf] >= alpha + beta)));
        let rhs = atom_mean(space, node, |leaf| if star[leaf] >= alpha { u[leaf] } else { 0.0 });
        CheckReport::new("garsia", lhs, rhs, Some(Witness::Atom { node }))
    });
    Ok(CheckReport::worst(reports).expect("at least one atom"))
}

/// Smallest `c` with `ess sup E_S(A_τ - A_{S-}) <= c` over all stopping times,
/// found by enumeration, together with a stopping time attaining it.
pub fn energy_constant(space: &FiniteFilteredSpace, a: &AdaptedProcess) -> Result<(f64, StoppingTime)> {
    require_nondecreasing(space, a)?;
    let d = space.depth();
    let terminal = a.level(d);
    let excess = |node: NodeId| atom_mean(space, node, |leaf| terminal[leaf]) - a.left_limit(space, node);
    let mut best = (f64::NEG_INFINITY, None);
    for st in enumerate_stopping_times(space, 0, d)? {
        let value = st.stop_nodes(space).into_iter().map(excess).fold(f64::NEG_INFINITY, f64::max);
        if value > best.0 {
            best = (value, Some(st));
        }
    }
    Ok((best.0, best.1.expect("at least one stopping time")))
}

/// `ess sup E_s (A_τ - A_s)^p <= p! c^p` once the hypothesis on `c` is verified.
pub fn energy_check(space: &FiniteFilteredSpace, a: &AdaptedProcess, s: usize, c: f64, p: u32) -> Result<CheckReport> {
    space.check_level(s)?;
    if p == 0 || !(c >= 0.0) {
        return Err(Error::InvalidParameter(format!("need p >= 1 and c >= 0, got p = {p}, c = {c}")));
    }
    let (needed, witness) = energy_constant(space, a)?;
    if needed > c + tolerance(c) {
        let nodes: Vec<String> = witness
            .stop_nodes(space)
            .iter()
            .map(|n| format!("({}, {})", n.level, n.index))
            .collect();
        return Err(Error::Hypothesis(format!(
            "stopping time with stop atoms [{}] gives E_S(A_tau - A_S-) = {needed} > c = {c}",
            nodes.join(", ")
        )));
    }
    let d = space.depth();
    let terminal = a.level(d);
    let (lhs, node) = max_over_level(space, s, |node| {
        let base = a.value(node);
        atom_mean(space, node, |leaf| (terminal[leaf] - base).powi(p as i32))
    });
    let factorial: f64 = (1..=p).map(f64::from).product();
    Ok(CheckReport::new(
        format!("energy-p{p}"),
        lhs,
        factorial * c.powi(p as i32),
        Some(Witness::Atom { node }),
    ))
}

/// `ρ_{s,t} <= 2B + 3C` with `B` the deterministic-pair modulus and `C` the largest jump on `[s, t]`.
pub fn stopping_pair_check(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<CheckReport> {
    let rho = rho_exact(space, v, s, t)?;
    let b = deterministic_pair_modulus(space, v, s, t)?;
    let c = window_max_jump(space, v, s, t)?;
    Ok(CheckReport::new(
        "stopping-pairs",
        rho,
        2.0 * b + 3.0 * c,
        Some(Witness::Window { start: s, end: t }),
    ))
}

/// Jumps are bounded by `κ`, with equality in the step embedding, and `κ <= ρ_{0,τ}`.
pub fn jump_checks(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> Result<[CheckReport; 3]> {
    let kappa = kappa_exact(space, v);
    let jump = max_path_jump(space, v);
    let rho = rho_exact(space, v, 0, space.depth())?;
    Ok([
        CheckReport::new("jump-below-kappa", jump, kappa, None),
        CheckReport::new("kappa-below-jump", kappa, jump, None),
        CheckReport::new("kappa-below-rho", kappa, rho, None),
    ])
}

/// `ρ[u][w] <= ρ[s][t]` for `[u, w] ⊆ [s, t]`.
pub fn monotonicity_check(rho: &[Vec<f64>]) -> CheckReport {
    let n = rho.len();
    let mut reports = Vec::new();
    for s in 0..n {
        for t in s..n {
            for u in s..=t {
                for w in u..=t {
                    reports.push(CheckReport::new(
                        "rho-monotone",
                        rho[u][w],
                        rho[s][t],
                        Some(Witness::Window { start: u, end: w }),
                    ));
                }
            }
        }
    }
    CheckReport::worst(reports).unwrap_or_else(|| CheckReport::new("rho-monotone", 0.0, 0.0, None))
}

/// `ρ[s][t] <= ρ[s][u] + ρ[u][t]`.
pub fn triangle_check(rho: &[Vec<f64>]) -> CheckReport {
    let n = rho.len();
    let mut reports = Vec::new();
    for s in 0..n {
        for t in s..n {
            for u in s..=t {
                reports.push(CheckReport::new(
                    "rho-triangle",
                    rho[s][t],
                    rho[s][u] + rho[u][t],
                    Some(Witness::Triple { start: s, mid: u, end: t }),
                ));
            }
        }
    }
    CheckReport::worst(reports).unwrap_or_else(|| CheckReport::new("rho-triangle", 0.0, 0.0, None))
}

/// Superadditivity of the control and `w >= ρ^p` on every window.
pub fn control_checks(rho: &[Vec<f64>], p: f64) -> Result<[CheckReport; 2]> {
    let control = pvar_control(rho, p)?;
    let w = &control.w;
    let n = w.len();
    let mut sup = Vec::new();
    let mut dom = Vec::new();
    for s in 0..n {
        for t in s..n {
            for u in s..=t {
                sup.push(CheckReport::new(
                    "control-superadditive",
                    w[s][u] + w[u][t],
                    w[s][t],
                    Some(Witness::Triple { start: s, mid: u, end: t }),
                ));
            }
            if t > s {
                dom.push(CheckReport::new(
                    "control-dominates-rho",
                    rho[s][t].powf(p),
                    w[s][t],
                    Some(Witness::Window { start: s, end: t }),
                ));
            }
        }
    }
    let empty = |name: &str| CheckReport::new(name, 0.0, 0.0, None);
    Ok([
        CheckReport::worst(sup).unwrap_or_else(|| empty("control-superadditive")),
        CheckReport::worst(dom).unwrap_or_else(|| empty("control-dominates-rho")),
    ])
}

/// `ess sup E_s |V_t - V_s| <= w_{s,t}^{1/p}` on every window.
pub fn vcontrol_check(space: &FiniteFilteredSpace, v: &AdaptedProcess, p: f64) -> Result<CheckReport> {
    let grid = rho_grid(space, v)?;
    let w = pvar_control(&grid.rho, p)?.w;
    let paths = paths(space, v);
    let d = space.depth();
    let mut reports = Vec::new();
    for s in 0..=d {
        for t in s..=d {
            let (lhs, node) = max_over_level(space, s, |node| {
                atom_mean(space, node, |leaf| (paths[leaf][t] - paths[leaf][s]).abs())
            });
            reports.push(CheckReport::new(
                "vcontrol",
                lhs,
                w[s][t].powf(1.0 / p),
                Some(Witness::WindowAtom { start: s, end: t, node }),
            ));
        }
    }
    Ok(CheckReport::worst(reports).expect("nonempty grid"))
}

/// Pathwise `|V_t - V_s| <= 22 w_{s,t}` with `w` the 1-variation control.
pub fn v1_check(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> Result<CheckReport> {
    let grid = rho_grid(space, v)?;
    let w = pvar_control(&grid.rho, 1.0)?.w;
    let d = space.depth();
    let mut reports = Vec::new();
    for (leaf, path) in paths(space, v).iter().enumerate() {
        for s in 0..=d {
            for t in s..=d {
                reports.push(CheckReport::new(
                    "v1-pathwise",
                    (path[t] - path[s]).abs(),
                    22.0 * w[s][t],
                    Some(Witness::Path { leaf, start: s, end: t }),
                ));
            }
        }
    }
    Ok(CheckReport::worst(reports).expect("nonempty grid"))
}

/// `sup_r ess sup E_r e^{λ max_{r<=k<=τ} |V_k - V_r|} <= 2^{1 + (22λ)^p w_{0,τ}}`, compared in log space.
pub fn exp_vmoa_check(space: &FiniteFilteredSpace, v: &AdaptedProcess, lambda: f64, p: f64) -> Result<CheckReport> {
    let grid = rho_grid(space, v)?;
    let d = space.depth();
    let w = pvar_control(&grid.rho, p)?.w[0][d];
    let log_rhs = exp_vmoa_log2_bound(lambda, p, w)? * std::f64::consts::LN_2;
    let paths = paths(space, v);
    let mut best = (f64::NEG_INFINITY, NodeId::ROOT);
    for r in 0..=d {
        let cand = max_over_level(space, r, |node| {
            atom_log_mean_exp(space, node, |leaf| {
                let path = &paths[leaf];
                lambda * path[r..].iter().map(|x| (x - path[r]).abs()).fold(0.0, f64::max)
            })
        });
        if cand.0 > best.0 {
            best = cand;
        }
    }
    Ok(CheckReport::from_logs(
        "exp-vmoa",
        best.0,
        log_rhs,
        Some(Witness::Atom { node: best.1 }),
    ))
}

/// Empirical ratio for the moment estimate whose constant is left unspecified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `ess sup E_s max_{s<=k<=t} |V_k - V_s|^m` against `C_p Γ(m(1-1/p)+1) w_{s,t}^{m/p}`.
pub fn vmo_moment_ratio(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    s: usize,
    t: usize,
    m: f64,
    p: f64,
    big_c_p: f64,
) -> Result<RatioReport> {
    space.check_window(s, t)?;
    let grid = rho_grid(space, v)?;
    let w = pvar_control(&grid.rho, p)?.w[s][t];
    let rhs = vmo_moment_bound(m, p, w, big_c_p)?;
    let paths = paths(space, v);
    let (lhs, _) = max_over_level(space, s, |node| {
        atom_mean(space, node, |leaf| {
            let path = &paths[leaf];
            path[s..=t].iter().map(|x| (x - path[s]).abs()).fold(0.0, f64::max).powf(m)
        })
    });
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(RatioReport {
        quantity: format!("vmo-moment-m{m}-p{p}"),
        lhs,
        rhs,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fair(depth: usize) -> FiniteFilteredSpace {
        FiniteFilteredSpace::uniform(depth, 2).unwrap()
    }

    fn walk(space: &FiniteFilteredSpace) -> AdaptedProcess {
        AdaptedProcess::from_increments(space, 0.0, &[1.0, -1.0]).unwrap()
    }

    #[test]
    fn jn_examples() {
        let space = fair(2);
        let c = jn_moment_check(&space, &AdaptedProcess::constant(&space, 2.0), 0, 3).unwrap();
        assert!(c.holds && c.lhs == 0.0 && c.rhs == 0.0);
        let w = jn_moment_check(&space, &walk(&space), 0, 1).unwrap();
        assert!(w.holds);
        assert!((w.lhs - 1.5).abs() < 1e-15 && (w.rhs - 11.0).abs() < 1e-12);
        let lin = AdaptedProcess::deterministic(&space, |k| k as f64);
        let l = jn_moment_check(&space, &lin, 0, 2).unwrap();
        assert_eq!((l.lhs, l.rhs), (4.0, 968.0));
    }

    #[test]
    fn khasminskii_examples() {
        let space = fair(2);
        let zero = AdaptedProcess::constant(&space, 0.0);
        let z = khasminskii_check(&space, &zero, 0, 1.0, &[0, 1, 2]).unwrap();
        assert!(z.holds && (z.lhs - 1.0).abs() < 1e-15 && z.rhs == 1.0);
        let a = AdaptedProcess::deterministic(&space, |k| k as f64 / 10.0);
        let r = khasminskii_check(&space, &a, 0, 1.0, &[0, 1, 2]).unwrap();
        assert!(r.holds);
        assert!((r.lhs - 0.2f64.exp()).abs() < 1e-12);
        assert!((r.rhs - 0.9f64.powi(-2)).abs() < 1e-12);
        let down = AdaptedProcess::deterministic(&space, |k| -(k as f64));
        assert!(matches!(
            khasminskii_check(&space, &down, 0, 1.0, &[0, 2]),
            Err(Error::NotNondecreasing(_))
        ));
    }

    #[test]
    fn maximal_examples() {
        let space = fair(2);
        let [a, b] = maximal_check(&space, &walk(&space), 0, 2).unwrap();
        assert!(a.holds && b.holds);
        assert!((b.lhs - 1.5).abs() < 1e-15 && (b.rhs - 4.0).abs() < 1e-12);
        let lin = AdaptedProcess::deterministic(&space, |k| k as f64);
        let [a, _] = maximal_check(&space, &lin, 0, 2).unwrap();
        assert_eq!(a.lhs, 2.0);
    }

    #[test]
    fn garsia_examples() {
        let space = fair(2);
        let v = walk(&space);
        let r = garsia_check(&space, &v, &[1.0; 4], &[0.0], 0, 1.0, 1.0).unwrap();
        assert!(r.holds && (r.lhs - 0.5).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let big = garsia_check(&space, &v, &[1.0; 4], &[0.0], 0, 1.0, 10.0).unwrap();
        assert_eq!(big.lhs, 0.0);
        let c = AdaptedProcess::constant(&space, 0.0);
        assert_eq!(garsia_check(&space, &c, &[0.0; 4], &[0.0], 0, 1.0, 1.0).unwrap().lhs, 0.0);
    }

    #[test]
    fn garsia_needs_start_near_y() {
        let space = fair(1);
        let c = AdaptedProcess::constant(&space, 10.0);
        assert!(matches!(
            garsia_check(&space, &c, &[0.0; 2], &[0.0], 0, 1.0, 1.0),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn garsia_reports_domination_failure() {
        let space = fair(2);
        let err = garsia_check(&space, &walk(&space), &[0.5; 4], &[0.0], 0, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("domination fails"));
    }

    #[test]
    fn energy_examples() {
        let space = fair(2);
        let zero = AdaptedProcess::constant(&space, 0.0);
        let z = energy_check(&space, &zero, 0, 0.0, 1).unwrap();
        assert!(z.holds && z.lhs == 0.0);
        let lin = AdaptedProcess::deterministic(&space, |k| k as f64);
        let r = energy_check(&space, &lin, 0, 2.0, 2).unwrap();
        assert_eq!((r.lhs, r.rhs), (4.0, 8.0));
        assert!(matches!(energy_check(&space, &lin, 0, 1.0, 2), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn v1_examples() {
        let space = fair(3);
        assert!(v1_check(&space, &AdaptedProcess::constant(&space, 1.0)).unwrap().holds);
        let lin = AdaptedProcess::deterministic(&space, |k| k as f64);
        assert!(v1_check(&space, &lin).unwrap().holds);
    }

    #[test]
    fn exp_vmoa_on_fair_walk() {
        let space = fair(2);
        let r = exp_vmoa_check(&space, &walk(&space), 0.05, 2.0).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
