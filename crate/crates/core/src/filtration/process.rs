use serde::{Deserialize, Serialize};

use super::space::{FiniteFilteredSpace, NodeId};
use crate::error::{Error, Result};

/// A real-valued adapted process on a [`FiniteFilteredSpace`], one value per node.
///
/// The value at a level-`k` node is `V_k` on that atom, so adaptedness holds by
/// construction. The continuous-time version is the right-continuous step
/// function `V_t = V_{⌊t⌋}`, hence `V_{k-} = V_{k-1}` for `k >= 1` and
/// `V_{0-} = V_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdaptedProcess {
    values: Vec<Vec<f64>>,
}

impl AdaptedProcess {
    /// Wraps per-level values after checking them against the space's shape.
    pub fn new(space: &FiniteFilteredSpace, values: Vec<Vec<f64>>) -> Result<Self> {
        let process = Self { values };
        process.validate(space)?;
        Ok(process)
    }

    pub fn validate(&self, space: &FiniteFilteredSpace) -> Result<()> {
        if self.values.len() != space.depth() + 1 {
            return Err(Error::Shape(format!(
                "process has {} levels, space has {}",
                self.values.len(),
                space.depth() + 1
            )));
        }
        for (level, row) in self.values.iter().enumerate() {
            if row.len() != space.width(level) {
                return Err(Error::Shape(format!(
                    "process level {level} has {} values, expected {}",
                    row.len(),
                    space.width(level)
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "process level {level} has a non-finite value"
                )));
            }
        }
        Ok(())
    }

    pub fn from_node_fn(space: &FiniteFilteredSpace, mut f: impl FnMut(NodeId) -> f64) -> Self {
        let values = (0..=space.depth())
            .map(|level| space.nodes(level).map(&mut f).collect())
            .collect();
        Self { values }
    }

    pub fn constant(space: &FiniteFilteredSpace, c: f64) -> Self {
        Self::from_node_fn(space, |_| c)
    }

    /// A deterministic process `V_k = f(k)`.
    pub fn deterministic(space: &FiniteFilteredSpace, f: impl Fn(usize) -> f64) -> Self {
        Self::from_node_fn(space, |node| f(node.level))
    }

    /// Random walk started at `start` whose increment into child `c` is `steps[c]`.
    pub fn from_increments(space: &FiniteFilteredSpace, start: f64, steps: &[f64]) -> Result<Self> {
        if steps.len() != space.branching() {
            return Err(Error::Shape(format!(
                "{} steps for branching {}",
                steps.len(),
                space.branching()
            )));
        }
        let mut values = vec![vec![start]];
        for level in 1..=space.depth() {
            let prev = &values[level - 1];
            let row = (0..space.width(level))
                .map(|i| prev[i / steps.len()] + steps[i % steps.len()])
                .collect();
            values.push(row);
        }
        Ok(Self { values })
    }

    pub fn value(&self, node: NodeId) -> f64 {
        self.values[node.level][node.index]
    }

    /// `V_{k-}` on the atom: the parent's value, or the node's own value at level 0.
    pub fn left_limit(&self, space: &FiniteFilteredSpace, node: NodeId) -> f64 {
        match space.parent(node) {
            Some(parent) => self.value(parent),
            None => self.value(node),
        }
    }

    pub fn level(&self, level: usize) -> &[f64] {
        &self.values[level]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Values `V_0, …, V_depth` along the path ending at `leaf`.
    pub fn path(&self, space: &FiniteFilteredSpace, leaf: usize) -> Vec<f64> {
        let leaf = NodeId::new(space.depth(), leaf);
        (0..=space.depth())
            .map(|k| self.value(space.ancestor(leaf, k)))
            .collect()
    }

    /// True when every path is nondecreasing.
    pub fn is_nondecreasing(&self, space: &FiniteFilteredSpace) -> bool {
        self.first_decrease(space).is_none()
    }

    pub(crate) fn first_decrease(&self, space: &FiniteFilteredSpace) -> Option<NodeId> {
        (1..=space.depth())
            .flat_map(|level| space.nodes(level))
            .find(|node| self.value(*node) < self.left_limit(space, *node))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(|v| f(*v)).collect())
                .collect(),
        }
    }
}

/// The maximal process `V*_k = max_{j <= k} |V_j - V_0|` along each path prefix.
pub fn maximal_process(space: &FiniteFilteredSpace, v: &AdaptedProcess) -> AdaptedProcess {
    let mut values: Vec<Vec<f64>> = vec![vec![0.0]];
    let v0 = v.value(NodeId::ROOT);
    for level in 1..=space.depth() {
        let row = space
            .nodes(level)
            .map(|node| {
                let parent = space.parent(node).expect("level >= 1");
                values[level - 1][parent.index].max((v.value(node) - v0).abs())
            })
            .collect();
        values.push(row);
    }
    AdaptedProcess { values }
}
