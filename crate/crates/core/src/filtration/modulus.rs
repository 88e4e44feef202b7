//! Exact moduli of mean oscillation for step processes on a probability tree.
//!
//! For a window `[s, t]`, the supremum over stopping pairs `s <= S <= T <= t`
//! of `ess sup E_S |V_T - V_{S-}|` decomposes over the atom at which `S`
//! stops: on that atom `ν` (level `k`) the conditional expectation only sees
//! the restriction of `T` to the subtree of `ν`. Two stopping conventions
//! arise from the step embedding `V_t = V_{⌊t⌋}`:
//!
//! * grid: `S = k`, so `V_{S-} = V_{k-1}` (the parent value);
//! * intra-interval: `S ∈ (k, k+1)` with `F_S = F_k` and `V_{S-} = V_k`,
//!   available when `k < t`.
//!
//! The inner supremum over `T` is computed either by enumerating every
//! stopping time of the subtree or by backward induction (the Snell envelope
//! of `|V - c|`). The two routes are independent and must agree.

use serde::{Deserialize, Serialize};

use super::process::AdaptedProcess;
use super::space::{FiniteFilteredSpace, NodeId};
use super::stopping::{check_feasible, DEFAULT_ENUMERATION_CAP};
use crate::error::Result;

/// How `V_{S-}` is read when `S` stops at the window start `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WindowStart {
    /// `V_{s-} = V_{s-1}`: the true left limit of the embedded process.
    #[default]
    LeftLimit,
    /// `V_{s-} = V_s`: the process restarted at `s` (its jump at `s` is ignored).
    Restarted,
}

/// Algorithm for the inner supremum over `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    /// Enumerate every stopping time of the subtree (subject to the cap).
    #[default]
    Enumeration,
    /// Backward induction; no cap applies.
    OptimalStopping,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulusOptions {
    pub cap: u64,
    pub start: WindowStart,
    pub method: Method,
}

impl Default for ModulusOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            start: WindowStart::LeftLimit,
            method: Method::Enumeration,
        }
    }
}

/// A modulus value together with the atom and convention attaining it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attained {
    pub value: f64,
    pub node: NodeId,
    /// True when attained by an intra-interval stopping time.
    pub intra: bool,
}

/// `E_ν |V_T - c|` for every stopping time `T` of the subtree of `node` with values up to `t`.
pub fn subtree_stop_values(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    node: NodeId,
    t: usize,
    c: f64,
) -> Vec<f64> {
    let here = (v.value(node) - c).abs();
    if node.level >= t {
        return vec![here];
    }
    let mut combos = vec![0.0];
    for child in space.children(node) {
        let p = space.transition(child);
        let child_vals = subtree_stop_values(space, v, child, t, c);
        let mut next = Vec::with_capacity(combos.len() * child_vals.len());
        for a in &combos {
            for x in &child_vals {
                next.push(a + p * x);
            }
        }
        combos = next;
    }
    combos.push(here);
    combos
}

/// `sup_T E_ν |V_T - c|` by backward induction.
pub fn subtree_snell(space: &FiniteFilteredSpace, v: &AdaptedProcess, node: NodeId, t: usize, c: f64) -> f64 {
    let here = (v.value(node) - c).abs();
    if node.level >= t {
        return here;
    }
    let cont: f64 = space
        .children(node)
        .map(|child| space.transition(child) * subtree_snell(space, v, child, t, c))
        .sum();
    here.max(cont)
}

fn subtree_sup(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    node: NodeId,
    t: usize,
    c: f64,
    method: Method,
) -> f64 {
    match method {
        Method::Enumeration => subtree_stop_values(space, v, node, t, c)
            .into_iter()
            .fold(0.0, f64::max),
        Method::OptimalStopping => subtree_snell(space, v, node, t, c),
    }
}

/// Suprema for a stopping time `S` that stops at `node`, over `T` up to `t`:
/// `(grid, intra)` where `intra` is `None` at `node.level == t`.
pub fn node_modulus(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    node: NodeId,
    t: usize,
    left: f64,
    method: Method,
) -> (f64, Option<f64>) {
    let grid = subtree_sup(space, v, node, t, left, method);
    let intra = (node.level < t).then(|| subtree_sup(space, v, node, t, v.value(node), method));
    (grid, intra)
}

fn best_at_level(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    level: usize,
    t: usize,
    restarted: bool,
    method: Method,
) -> Attained {
    let mut best = Attained {
        value: 0.0,
        node: NodeId::new(level, 0),
        intra: false,
    };
    for node in space.nodes(level) {
        let left = if restarted {
            v.value(node)
        } else {
            v.left_limit(space, node)
        };
        let (grid, intra) = node_modulus(space, v, node, t, left, method);
        if grid > best.value {
            best = Attained { value: grid, node, intra: false };
        }
        if let Some(x) = intra {
            if x > best.value {
                best = Attained { value: x, node, intra: true };
            }
        }
    }
    best
}

/// `ρ_{s,t}(V)` with its attaining atom, under explicit options.
pub fn rho_attained(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    s: usize,
    t: usize,
    opts: &ModulusOptions,
) -> Result<Attained> {
    space.check_window(s, t)?;
    if opts.method == Method::Enumeration {
        check_feasible(space, s, t, opts.cap)?;
    }
    let mut best = Attained {
        value: 0.0,
        node: NodeId::new(s, 0),
        intra: false,
    };
    for level in s..=t {
        let restarted = level == s && opts.start == WindowStart::Restarted;
        let cand = best_at_level(space, v, level, t, restarted, opts.method);
        if cand.value > best.value {
            best = cand;
        }
    }
    Ok(best)
}

/// Modulus of mean oscillation `ρ_{s,t}(V)` by exhaustive stopping-time enumeration.
pub fn rho_exact(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<f64> {
    Ok(rho_attained(space, v, s, t, &ModulusOptions::default())?.value)
}

/// `ρ_{s,t}` of the process restarted at `s` (`V_{s-} := V_s`).
pub fn rho_restarted(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<f64> {
    let opts = ModulusOptions {
        start: WindowStart::Restarted,
        ..Default::default()
    };
    Ok(rho_attained(space, v, s, t, &opts)?.value)
}

/// `ρ_{s,t}` by backward induction (no enumeration cap).
pub fn rho_optimal_stopping(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<f64> {
    let opts = ModulusOptions {
        method: Method::OptimalStopping,
        ..Default::default()
    };
    Ok(rho_attained(space, v, s, t, &opts)?.value)
}

/// `κ(V)` for the step embedding: the largest one-step jump over all atoms.
pub fn kappa_exact(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> f64 {
    (1..=space.depth())
        .flat_map(|level| space.nodes(level))
        .map(|node| (v.value(node) - v.left_limit(space, node)).abs())
        .fold(0.0, f64::max)
}

/// Largest jump seen along any path, scanned leaf by leaf.
pub fn max_path_jump(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> f64 {
    (0..space.width(space.depth()))
        .flat_map(|leaf| {
            let path = v.path(space, leaf);
            path.windows(2).map(|w| (w[1] - w[0]).abs()).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}

/// `E_ν |V_level - c|` for a fixed later level.
pub fn cond_abs_deviation(space: &FiniteFilteredSpace, v: &AdaptedProcess, node: NodeId, level: usize, c: f64) -> f64 {
    space
        .descendants(node, level)
        .map(|i| {
            let d = NodeId::new(level, i);
            space.cond_prob(node, d) * (v.value(d) - c).abs()
        })
        .sum()
}

/// Deterministic-time modulus on `[s, t]`: the largest `ess sup E_u |V_w - V_{u-}|`
/// over grid pairs `s <= u <= w <= t`, together with the intra-interval pairs
/// `E_u |V_w - V_u|` (start strictly inside `(u, u+1)`).
pub fn deterministic_pair_modulus(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<f64> {
    space.check_window(s, t)?;
    let mut best: f64 = 0.0;
    for u in s..=t {
        for node in space.nodes(u) {
            let left = v.left_limit(space, node);
            let here = v.value(node);
            for w in u..=t {
                best = best.max(cond_abs_deviation(space, v, node, w, left));
                if u < t {
                    best = best.max(cond_abs_deviation(space, v, node, w, here));
                }
            }
        }
    }
    Ok(best)
}

/// Largest jump `|V_j - V_{j-1}|` over `j` in `[s, t]`, including a jump at `s` itself.
pub fn window_max_jump(space: &FiniteFilteredSpace, v: &AdaptedProcess, s: usize, t: usize) -> Result<f64> {
    space.check_window(s, t)?;
    Ok((s.max(1)..=t)
        .flat_map(|level| space.nodes(level))
        .map(|node| (v.value(node) - v.left_limit(space, node)).abs())
        .fold(0.0, f64::max))
}

/// Grid of moduli over every window of a space, plus `κ` and the largest jump.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationData {
    /// `rho[s][t]` for `s <= t`; zero below the diagonal. `rho[j][j]` is the jump at `j`.
    pub rho: Vec<Vec<f64>>,
    pub kappa: f64,
    pub max_jump: f64,
}

impl OscillationData {
    pub fn depth(&self) -> usize {
        self.rho.len() - 1
    }
}

/// Every `ρ_{s,t}` at once: per-level suprema are computed once per `(k, t)`
/// and `ρ_{s,t} = max_{s <= k <= t} M(k, t)`.
pub fn rho_grid(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> Result<OscillationData> {
    rho_grid_with(space, v, Method::Enumeration, DEFAULT_ENUMERATION_CAP)
}

pub fn rho_grid_with(
    space: &FiniteFilteredSpace,
    v: &AdaptedProcess,
    method: Method,
    cap: u64,
) -> Result<OscillationData> {
    let depth = space.depth();
    if method == Method::Enumeration {
        for s in 0..=depth {
            check_feasible(space, s, depth, cap)?;
        }
    }
    let mut level_best = vec![vec![0.0; depth + 1]; depth + 1];
    for (t, _) in (0..=depth).enumerate() {
        for k in 0..=t {
            level_best[k][t] = best_at_level(space, v, k, t, false, method).value;
        }
    }
    let mut rho = vec![vec![0.0; depth + 1]; depth + 1];
    for t in 0..=depth {
        let mut running: f64 = 0.0;
        for s in (0..=t).rev() {
            running = running.max(level_best[s][t]);
            rho[s][t] = running;
        }
    }
    Ok(OscillationData {
        rho,
        kappa: kappa_exact(space, v),
        max_jump: max_path_jump(space, v),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn walk(depth: usize) -> (FiniteFilteredSpace, AdaptedProcess) {
        let space = FiniteFilteredSpace::uniform(depth, 2).unwrap();
        let v = AdaptedProcess::from_increments(&space, 0.0, &[1.0, -1.0]).unwrap();
        (space, v)
    }

    #[test]
    fn constant_has_zero_modulus() {
        let space = FiniteFilteredSpace::uniform(3, 2).unwrap();
        let v = AdaptedProcess::constant(&space, 3.0);
        assert_eq!(rho_exact(&space, &v, 0, 3).unwrap(), 0.0);
        assert_eq!(kappa_exact(&space, &v), 0.0);
    }

    #[test]
    fn deterministic_linear() {
        let space = FiniteFilteredSpace::uniform(2, 2).unwrap();
        let v = AdaptedProcess::deterministic(&space, |k| k as f64);
        assert_eq!(rho_exact(&space, &v, 0, 2).unwrap(), 2.0);
    }

    #[test]
    fn fair_walk_window() {
        let (space, v) = walk(2);
        assert!((rho_exact(&space, &v, 0, 2).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(kappa_exact(&space, &v), 1.0);
    }

    #[test]
    fn kappa_of_squares() {
        let space = FiniteFilteredSpace::uniform(3, 2).unwrap();
        let v = AdaptedProcess::deterministic(&space, |k| (k * k) as f64);
        assert_eq!(kappa_exact(&space, &v), 5.0);
    }

    #[test]
    fn restart_drops_jump_at_window_start() {
        let space = FiniteFilteredSpace::uniform(2, 2).unwrap();
        let a = AdaptedProcess::deterministic(&space, |k| k as f64 / 10.0);
        assert!((rho_exact(&space, &a, 1, 2).unwrap() - 0.2).abs() < 1e-15);
        assert!((rho_restarted(&space, &a, 1, 2).unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn diagonal_is_jump() {
        let (space, v) = walk(3);
        let grid = rho_grid(&space, &v).unwrap();
        assert_eq!(grid.rho[0][0], 0.0);
        for j in 1..=3 {
            assert_eq!(grid.rho[j][j], 1.0);
        }
    }

    #[test]
    fn stop_value_count_matches_recursion() {
        let (space, v) = walk(4);
        let vals = subtree_stop_values(&space, &v, NodeId::ROOT, 4, 0.0);
        assert_eq!(vals.len(), 677);
    }
}
