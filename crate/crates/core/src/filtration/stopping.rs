//! Enumeration of stopping times on a window of grid levels.

use super::space::{FiniteFilteredSpace, NodeId};
use crate::error::{Error, Result};

/// Default cap on the number of stopping times an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// A stopping time with values in the grid window `[start, end]`.
///
/// `labels[k - start][i]` is true when the time stops at node `(k, i)`. Only
/// the first labelled node on each path counts; enumerated stopping times are
/// canonical, so the labelled nodes form an antichain that every path meets
/// exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StoppingTime {
    start: usize,
    end: usize,
    labels: Vec<Vec<bool>>,
}

impl StoppingTime {
    /// The stopping time that stops at `level` everywhere.
    pub fn constant(space: &FiniteFilteredSpace, level: usize) -> Result<Self> {
        space.check_level(level)?;
        Self::from_stop_nodes(space, level, level, &space.nodes(level).collect::<Vec<_>>())
    }

    /// Builds a stopping time from an explicit set of stop nodes; paths that
    /// never meet one stop at `end`.
    pub fn from_stop_nodes(
        space: &FiniteFilteredSpace,
        start: usize,
        end: usize,
        nodes: &[NodeId],
    ) -> Result<Self> {
        space.check_window(start, end)?;
        let mut labels: Vec<Vec<bool>> = (start..=end)
            .map(|k| vec![false; space.width(k)])
            .collect();
        for node in nodes {
            if node.level < start || node.level > end {
                return Err(Error::Window {
                    start,
                    end,
                    depth: space.depth(),
                });
            }
            labels[node.level - start][node.index] = true;
        }
        labels[end - start].iter_mut().for_each(|l| *l = true);
        Ok(Self { start, end, labels })
    }

    pub fn window(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    /// Raw label of a node (false outside the window).
    pub fn is_labelled(&self, node: NodeId) -> bool {
        node.level >= self.start
            && node.level <= self.end
            && self.labels[node.level - self.start][node.index]
    }

    /// The node at which the path through `leaf` stops.
    pub fn stop_node(&self, space: &FiniteFilteredSpace, leaf: usize) -> NodeId {
        let leaf = NodeId::new(space.depth(), leaf);
        (self.start..=self.end)
            .map(|k| space.ancestor(leaf, k))
            .find(|n| self.is_labelled(*n))
            .expect("every path stops by the window end")
    }

    /// The effective stop nodes (the first labelled node on some path).
    pub fn stop_nodes(&self, space: &FiniteFilteredSpace) -> Vec<NodeId> {
        let mut nodes: Vec<NodeId> = (0..space.width(space.depth()))
            .map(|leaf| self.stop_node(space, leaf))
            .collect();
        nodes.sort();
        nodes.dedup();
        nodes
    }

    /// Pathwise `self >= other`.
    pub fn dominates(&self, space: &FiniteFilteredSpace, other: &StoppingTime) -> bool {
        (0..space.width(space.depth()))
            .all(|leaf| self.stop_node(space, leaf).level >= other.stop_node(space, leaf).level)
    }
}

/// `N_b(d)`: stopping times of a single `b`-ary subtree on a window of width `d`,
/// from `N(0) = 1`, `N(d) = 1 + N(d-1)^b`. Saturates to infinity.
pub fn subtree_count(branching: usize, width: usize) -> f64 {
    (0..width).fold(1.0, |n: f64, _| 1.0 + n.powi(branching as i32))
}

/// Number of stopping times with values in `[s, t]`: one independent subtree
/// choice per level-`s` atom.
pub fn stopping_time_count(space: &FiniteFilteredSpace, s: usize, t: usize) -> Result<f64> {
    space.check_window(s, t)?;
    Ok(subtree_count(space.branching(), t - s).powf(space.width(s) as f64))
}

pub(crate) fn check_feasible(space: &FiniteFilteredSpace, s: usize, t: usize, cap: u64) -> Result<()> {
    let count = stopping_time_count(space, s, t)?;
    if count > cap as f64 {
        return Err(Error::EnumerationInfeasible { count, cap });
    }
    Ok(())
}

/// Every stopping time with values in `[s, t]`, using [`DEFAULT_ENUMERATION_CAP`].
pub fn enumerate_stopping_times(
    space: &FiniteFilteredSpace,
    s: usize,
    t: usize,
) -> Result<Vec<StoppingTime>> {
    enumerate_stopping_times_with_cap(space, s, t, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_stopping_times_with_cap(
    space: &FiniteFilteredSpace,
    s: usize,
    t: usize,
    cap: u64,
) -> Result<Vec<StoppingTime>> {
    check_feasible(space, s, t, cap)?;
    let per_root: Vec<Vec<Vec<NodeId>>> = space.nodes(s).map(|n| subtree_cuts(space, n, t)).collect();
    let mut combos: Vec<Vec<NodeId>> = vec![Vec::new()];
    for cuts in &per_root {
        let mut next = Vec::with_capacity(combos.len() * cuts.len());
        for prefix in &combos {
            for cut in cuts {
                let mut c = prefix.clone();
                c.extend_from_slice(cut);
                next.push(c);
            }
        }
        combos = next;
    }
    combos
        .iter()
        .map(|nodes| StoppingTime::from_stop_nodes(space, s, t, nodes))
        .collect()
}

/// All cuts (antichains met by every path) of the subtree under `node`, down to level `t`.
pub fn subtree_cuts(space: &FiniteFilteredSpace, node: NodeId, t: usize) -> Vec<Vec<NodeId>> {
    let mut out = vec![vec![node]];
    if node.level == t {
        return out;
    }
    let mut combos: Vec<Vec<NodeId>> = vec![Vec::new()];
    for child in space.children(node) {
        let child_cuts = subtree_cuts(space, child, t);
        let mut next = Vec::with_capacity(combos.len() * child_cuts.len());
        for prefix in &combos {
            for cut in &child_cuts {
                let mut c = prefix.clone();
                c.extend_from_slice(cut);
                next.push(c);
            }
        }
        combos = next;
    }
    out.extend(combos);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_recursion() {
        let n: Vec<f64> = (0..=5).map(|d| subtree_count(2, d)).collect();
        assert_eq!(n, vec![1.0, 2.0, 5.0, 26.0, 677.0, 458_330.0]);
    }

    #[test]
    fn binary_window_counts() {
        let space = FiniteFilteredSpace::uniform(3, 2).unwrap();
        assert_eq!(enumerate_stopping_times(&space, 0, 1).unwrap().len(), 2);
        assert_eq!(enumerate_stopping_times(&space, 0, 2).unwrap().len(), 5);
        assert_eq!(enumerate_stopping_times(&space, 2, 2).unwrap().len(), 1);
        // two independent level-1 subtrees of width 2
        assert_eq!(enumerate_stopping_times(&space, 1, 3).unwrap().len(), 25);
    }

    #[test]
    fn every_path_stops_once() {
        let space = FiniteFilteredSpace::uniform(3, 2).unwrap();
        for st in enumerate_stopping_times(&space, 0, 3).unwrap() {
            for leaf in 0..8 {
                let stop = st.stop_node(&space, leaf);
                let labelled_on_path = (0..=3)
                    .filter(|k| st.is_labelled(space.ancestor(NodeId::new(3, leaf), *k)))
                    .count();
                assert!(labelled_on_path >= 1);
                assert!(stop.level <= 3);
            }
        }
    }

    #[test]
    fn infeasible_window_names_the_count() {
        let space = FiniteFilteredSpace::uniform(6, 2).unwrap();
        match enumerate_stopping_times(&space, 0, 6) {
            Err(Error::EnumerationInfeasible { count, cap }) => {
                assert_eq!(cap, DEFAULT_ENUMERATION_CAP);
                assert_eq!(count, 1.0 + 458_330.0f64 * 458_330.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
