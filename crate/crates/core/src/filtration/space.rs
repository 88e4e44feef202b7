use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::pairwise_sum;

/// Tolerance for "sums to one" validation.
pub const PROB_TOLERANCE: f64 = 1e-12;

/// A node of the probability tree: the `index`-th atom of the level-`level` partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId {
    pub level: usize,
    pub index: usize,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { level: 0, index: 0 };

    pub fn new(level: usize, index: usize) -> Self {
        Self { level, index }
    }
}

/// How edge probabilities are supplied to [`build_tree`].
#[derive(Debug, Clone, PartialEq)]
pub enum TransitionProbs {
    /// The same child distribution at every node.
    Uniform(Vec<f64>),
    /// `[level][node][child]` for levels `0..depth`.
    PerNode(Vec<Vec<Vec<f64>>>),
}

/// A rooted probability tree encoding a discrete filtration `F_0 ⊂ F_1 ⊂ … ⊂ F_depth`.
///
/// Level `k` has `branching^k` atoms, indexed left to right; the children of
/// atom `i` at level `k` are atoms `i*b .. (i+1)*b` at level `k+1`. Spaces are
/// immutable after construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceDocument", into = "SpaceDocument")]
pub struct FiniteFilteredSpace {
    depth: usize,
    branching: usize,
    // transitions[k][j]: probability of level-(k+1) atom j given its parent
    transitions: Vec<Vec<f64>>,
    atoms: Vec<Vec<f64>>,
}

/// Builds and validates a tree of the given depth and branching.
pub fn build_tree(
    depth: usize,
    branching: usize,
    probs: &TransitionProbs,
) -> Result<FiniteFilteredSpace> {
    if branching < 2 {
        return Err(Error::InvalidParameter(format!(
            "branching must be at least 2, got {branching}"
        )));
    }
    let mut transitions = Vec::with_capacity(depth);
    for level in 0..depth {
        let parents = checked_pow(branching, level)?;
        let mut row = Vec::with_capacity(parents * branching);
        for node in 0..parents {
            let dist: &[f64] = match probs {
                TransitionProbs::Uniform(p) => p,
                TransitionProbs::PerNode(all) => all
                    .get(level)
                    .and_then(|l| l.get(node))
                    .ok_or_else(|| {
                        Error::Shape(format!("missing transition probabilities for node ({level}, {node})"))
                    })?,
            };
            validate_distribution(dist, branching, NodeId::new(level, node))?;
            row.extend_from_slice(dist);
        }
        transitions.push(row);
    }
    if let TransitionProbs::PerNode(all) = probs {
        if all.len() != depth {
            return Err(Error::Shape(format!(
                "expected transition probabilities for {depth} levels, got {}",
                all.len()
            )));
        }
        for (level, nodes) in all.iter().enumerate() {
            if nodes.len() != branching.pow(level as u32) {
                return Err(Error::Shape(format!(
                    "level {level} has {} nodes, expected {}",
                    nodes.len(),
                    branching.pow(level as u32)
                )));
            }
        }
    }

    let mut atoms = vec![vec![1.0]];
    for (level, row) in transitions.iter().enumerate() {
        let prev = &atoms[level];
        let next: Vec<f64> = row
            .iter()
            .enumerate()
            .map(|(j, p)| prev[j / branching] * p)
            .collect();
        let total = pairwise_sum(&next);
        if (total - 1.0).abs() > PROB_TOLERANCE * (1.0 + next.len() as f64).sqrt() {
            return Err(Error::InvalidProbabilities(format!(
                "level {} absolute probabilities sum to {total}",
                level + 1
            )));
        }
        atoms.push(next);
    }
    Ok(FiniteFilteredSpace {
        depth,
        branching,
        transitions,
        atoms,
    })
}

fn checked_pow(base: usize, exp: usize) -> Result<usize> {
    base.checked_pow(exp as u32)
        .filter(|n| *n <= 1 << 24)
        .ok_or_else(|| Error::InvalidParameter(format!("tree with {base}^{exp} atoms is too large")))
}

fn validate_distribution(dist: &[f64], branching: usize, node: NodeId) -> Result<()> {
    if dist.len() != branching {
        return Err(Error::Shape(format!(
            "node ({}, {}) has {} child probabilities, expected {branching}",
            node.level,
            node.index,
            dist.len()
        )));
    }
    if let Some(p) = dist.iter().find(|p| !(**p > 0.0) || !p.is_finite()) {
        return Err(Error::InvalidProbabilities(format!(
            "node ({}, {}) has non-positive transition probability {p}",
            node.level, node.index
        )));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > PROB_TOLERANCE {
        return Err(Error::InvalidProbabilities(format!(
            "node ({}, {}) transition probabilities sum to {total}",
            node.level, node.index
        )));
    }
    Ok(())
}

impl FiniteFilteredSpace {
    /// Fair tree: every child has probability `1/branching`.
    pub fn uniform(depth: usize, branching: usize) -> Result<Self> {
        build_tree(
            depth,
            branching,
            &TransitionProbs::Uniform(vec![1.0 / branching as f64; branching]),
        )
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    /// Number of atoms at `level`.
    pub fn width(&self, level: usize) -> usize {
        self.atoms[level].len()
    }

    pub fn nodes(&self, level: usize) -> impl Iterator<Item = NodeId> {
        (0..self.width(level)).map(move |index| NodeId { level, index })
    }

    pub fn leaves(&self) -> impl Iterator<Item = NodeId> {
        self.nodes(self.depth)
    }

    /// Absolute probability of an atom.
    pub fn prob(&self, node: NodeId) -> f64 {
        self.atoms[node.level][node.index]
    }

    /// Absolute probabilities of every atom at `level`.
    pub fn level_probs(&self, level: usize) -> &[f64] {
        &self.atoms[level]
    }

    /// Probability of moving from the parent of `node` to `node`. Equals 1 at the root.
    pub fn transition(&self, node: NodeId) -> f64 {
        if node.level == 0 {
            1.0
        } else {
            self.transitions[node.level - 1][node.index]
        }
    }

    pub fn parent(&self, node: NodeId) -> Option<NodeId> {
        (node.level > 0).then(|| NodeId::new(node.level - 1, node.index / self.branching))
    }

    pub fn children(&self, node: NodeId) -> impl Iterator<Item = NodeId> {
        let b = self.branching;
        let level = node.level + 1;
        let has = node.level < self.depth;
        (0..if has { b } else { 0 }).map(move |c| NodeId::new(level, node.index * b + c))
    }

    /// The level-`level` ancestor of `node` (`level <= node.level`).
    pub fn ancestor(&self, node: NodeId, level: usize) -> NodeId {
        debug_assert!(level <= node.level);
        let span = self.branching.pow((node.level - level) as u32);
        NodeId::new(level, node.index / span)
    }

    /// Indices of the level-`level` descendants of `node` (a contiguous block).
    pub fn descendants(&self, node: NodeId, level: usize) -> std::ops::Range<usize> {
        debug_assert!(level >= node.level);
        let span = self.branching.pow((level - node.level) as u32);
        node.index * span..(node.index + 1) * span
    }

    /// Conditional probability of `desc` given its ancestor `node`.
    pub fn cond_prob(&self, node: NodeId, desc: NodeId) -> f64 {
        self.prob(desc) / self.prob(node)
    }

    pub fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth {
            return Err(Error::LevelOutOfRange {
                level,
                depth: self.depth,
            });
        }
        Ok(())
    }

    pub fn check_window(&self, start: usize, end: usize) -> Result<()> {
        if start > end || end > self.depth {
            return Err(Error::Window {
                start,
                end,
                depth: self.depth,
            });
        }
        Ok(())
    }

    /// `E[X | F_s]` for a leaf-indexed random variable, as values on the level-`s` atoms.
    ///
    /// Computed as a direct weighted average over each atom's block of leaves.
    pub fn cond_expectation(&self, leaf_values: &[f64], s: usize) -> Result<Vec<f64>> {
        self.check_level(s)?;
        self.check_len(leaf_values, self.depth)?;
        let leaf_probs = &self.atoms[self.depth];
        Ok(self
            .nodes(s)
            .map(|node| {
                let block = self.descendants(node, self.depth);
                let weighted: Vec<f64> = block
                    .clone()
                    .map(|i| leaf_probs[i] * leaf_values[i])
                    .collect();
                pairwise_sum(&weighted) / self.prob(node)
            })
            .collect())
    }

    /// One step of backward averaging: level-`level` values to level-`level - 1`
    /// conditional expectations, using transition probabilities only.
    pub fn average_children(&self, values: &[f64], level: usize) -> Result<Vec<f64>> {
        if level == 0 || level > self.depth {
            return Err(Error::LevelOutOfRange {
                level,
                depth: self.depth,
            });
        }
        self.check_len(values, level)?;
        let b = self.branching;
        let trans = &self.transitions[level - 1];
        Ok(values
            .chunks(b)
            .zip(trans.chunks(b))
            .map(|(v, p)| v.iter().zip(p).map(|(v, p)| v * p).sum())
            .collect())
    }

    /// Extends level-`level` values to the leaves (each leaf inherits its ancestor's value).
    pub fn lift(&self, values: &[f64], level: usize) -> Result<Vec<f64>> {
        self.check_level(level)?;
        self.check_len(values, level)?;
        let span = self.branching.pow((self.depth - level) as u32);
        Ok((0..self.width(self.depth)).map(|i| values[i / span]).collect())
    }

    fn check_len(&self, values: &[f64], level: usize) -> Result<()> {
        if values.len() != self.width(level) {
            return Err(Error::Shape(format!(
                "expected {} values at level {level}, got {}",
                self.width(level),
                values.len()
            )));
        }
        Ok(())
    }

    /// Transition probabilities in the `[level][node][child]` layout used by the JSON schema.
    pub fn transition_table(&self) -> Vec<Vec<Vec<f64>>> {
        self.transitions
            .iter()
            .map(|row| row.chunks(self.branching).map(<[f64]>::to_vec).collect())
            .collect()
    }
}

/// JSON form of a space: `{"depth": d, "branching": b, "transition_probs": [[[..]]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    pub depth: usize,
    pub branching: usize,
    pub transition_probs: Vec<Vec<Vec<f64>>>,
}

impl TryFrom<SpaceDocument> for FiniteFilteredSpace {
    type Error = Error;

    fn try_from(doc: SpaceDocument) -> Result<Self> {
        build_tree(
            doc.depth,
            doc.branching,
            &TransitionProbs::PerNode(doc.transition_probs),
        )
    }
}

impl From<FiniteFilteredSpace> for SpaceDocument {
    fn from(space: FiniteFilteredSpace) -> Self {
        SpaceDocument {
            depth: space.depth,
            branching: space.branching,
            transition_probs: space.transition_table(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_zero_is_a_single_atom() {
        let space = FiniteFilteredSpace::uniform(0, 2).unwrap();
        assert_eq!(space.width(0), 1);
        assert_eq!(space.prob(NodeId::ROOT), 1.0);
        assert_eq!(space.cond_expectation(&[4.5], 0).unwrap(), vec![4.5]);
    }

    #[test]
    fn fair_binary_depth_three_has_eighth_leaves() {
        let space = FiniteFilteredSpace::uniform(3, 2).unwrap();
        assert_eq!(space.width(3), 8);
        assert!(space.level_probs(3).iter().all(|p| *p == 0.125));
    }

    #[test]
    fn biased_binary_leaf_probabilities() {
        let space = build_tree(2, 2, &TransitionProbs::Uniform(vec![0.3, 0.7])).unwrap();
        let leaves = space.level_probs(2);
        let expected = [0.09, 0.21, 0.21, 0.49];
        for (p, e) in leaves.iter().zip(expected) {
            assert!((p - e).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_probabilities() {
        assert!(matches!(
            build_tree(2, 2, &TransitionProbs::Uniform(vec![0.5, 0.6])),
            Err(Error::InvalidProbabilities(_))
        ));
        assert!(matches!(
            build_tree(2, 2, &TransitionProbs::Uniform(vec![1.0, 0.0])),
            Err(Error::InvalidProbabilities(_))
        ));
        assert!(matches!(
            build_tree(2, 1, &TransitionProbs::Uniform(vec![1.0])),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            build_tree(1, 2, &TransitionProbs::Uniform(vec![0.5, 0.25, 0.25])),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn cond_expectation_of_constant_and_indicator() {
        let space = build_tree(2, 2, &TransitionProbs::Uniform(vec![0.3, 0.7])).unwrap();
        let c = space.cond_expectation(&[2.0; 4], 1).unwrap();
        assert!(c.iter().all(|v| (v - 2.0).abs() < 1e-15));
        // child 0 is "up"; indicator of the up-up leaf
        let e = space.cond_expectation(&[1.0, 0.0, 0.0, 0.0], 1).unwrap();
        assert!((e[0] - 0.3).abs() < 1e-15);
        assert_eq!(e[1], 0.0);
    }

    #[test]
    fn level_out_of_range() {
        let space = FiniteFilteredSpace::uniform(2, 2).unwrap();
        assert_eq!(
            space.cond_expectation(&[0.0; 4], 3),
            Err(Error::LevelOutOfRange { level: 3, depth: 2 })
        );
    }

    #[test]
    fn json_roundtrip_and_validation() {
        let space = build_tree(2, 3, &TransitionProbs::Uniform(vec![0.2, 0.3, 0.5])).unwrap();
        let text = serde_json::to_string(&space).unwrap();
        let back: FiniteFilteredSpace = serde_json::from_str(&text).unwrap();
        assert_eq!(space, back);
        let bad = r#"{"depth":1,"branching":2,"transition_probs":[[[0.9,0.2]]]}"#;
        assert!(serde_json::from_str::<FiniteFilteredSpace>(bad).is_err());
    }
}
