//! Randomized spaces and processes for the exact inequality suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::process::AdaptedProcess;
use super::space::{build_tree, FiniteFilteredSpace, TransitionProbs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProcessFamily {
    /// Independent standard normal value at every node.
    Gaussian,
    /// Random walk with normal increments of random scale.
    RandomWalk,
    /// Conditional expectations of a random terminal variable.
    Martingale,
    /// Mostly flat paths with occasional large jumps.
    Jumps,
    /// Deterministic values `V_k = f(k)`.
    Deterministic,
    /// Pathwise nondecreasing: cumulative sums of nonnegative increments.
    Nondecreasing,
}

impl ProcessFamily {
    pub const ALL: [ProcessFamily; 6] = [
        ProcessFamily::Gaussian,
        ProcessFamily::RandomWalk,
        ProcessFamily::Martingale,
        ProcessFamily::Jumps,
        ProcessFamily::Deterministic,
        ProcessFamily::Nondecreasing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProcessFamily::Gaussian => "gaussian",
            ProcessFamily::RandomWalk => "random-walk",
            ProcessFamily::Martingale => "martingale",
            ProcessFamily::Jumps => "jumps",
            ProcessFamily::Deterministic => "deterministic",
            ProcessFamily::Nondecreasing => "nondecreasing",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CorpusCase {
    pub id: usize,
    pub family: ProcessFamily,
    pub space: FiniteFilteredSpace,
    pub process: AdaptedProcess,
}

/// Binary tree whose up-probability at each node is uniform on `[0.1, 0.9]`.
pub fn random_space<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> FiniteFilteredSpace {
    let table = (0..depth)
        .map(|level| {
            (0..1usize << level)
                .map(|_| {
                    let up = rng.random_range(0.1..0.9);
                    vec![up, 1.0 - up]
                })
                .collect()
        })
        .collect();
    build_tree(depth, 2, &TransitionProbs::PerNode(table)).expect("probabilities in (0, 1)")
}

pub fn random_process<R: Rng + ?Sized>(
    rng: &mut R,
    space: &FiniteFilteredSpace,
    family: ProcessFamily,
) -> AdaptedProcess {
    match family {
        ProcessFamily::Gaussian => AdaptedProcess::from_node_fn(space, |_| rng.sample(StandardNormal)),
        ProcessFamily::RandomWalk => {
            let scale = rng.random_range(0.1..2.0);
            let start: f64 = rng.sample(StandardNormal);
            accumulate(space, start, |_| scale * rng.sample::<f64, _>(StandardNormal))
        }
        ProcessFamily::Martingale => {
            let leaves: Vec<f64> = (0..space.width(space.depth()))
                .map(|_| rng.sample(StandardNormal))
                .collect();
            let values = (0..=space.depth())
                .map(|s| space.cond_expectation(&leaves, s).expect("level in range"))
                .collect();
            AdaptedProcess::new(space, values).expect("shape from space")
        }
        ProcessFamily::Jumps => {
            let size = rng.random_range(0.5..5.0);
            accumulate(space, 0.0, |_| {
                if rng.random_bool(0.25) {
                    size * if rng.random_bool(0.5) { 1.0 } else { -1.0 }
                } else {
                    0.05 * rng.sample::<f64, _>(StandardNormal)
                }
            })
        }
        ProcessFamily::Deterministic => {
            let path: Vec<f64> = (0..=space.depth()).map(|_| rng.sample(StandardNormal)).collect();
            AdaptedProcess::deterministic(space, |k| path[k])
        }
        ProcessFamily::Nondecreasing => random_nondecreasing(rng, space),
    }
}

/// Cumulative sums of exponential or Bernoulli increments.
pub fn random_nondecreasing<R: Rng + ?Sized>(rng: &mut R, space: &FiniteFilteredSpace) -> AdaptedProcess {
    let bernoulli = rng.random_bool(0.5);
    let scale = rng.random_range(0.05..0.5);
    accumulate(space, 0.0, |_| {
        if bernoulli {
            if rng.random_bool(0.5) { scale } else { 0.0 }
        } else {
            -scale * (1.0 - rng.random::<f64>()).ln()
        }
    })
}

fn accumulate(space: &FiniteFilteredSpace, start: f64, mut step: impl FnMut(usize) -> f64) -> AdaptedProcess {
    let mut values = vec![vec![start]];
    for level in 1..=space.depth() {
        let row = (0..space.width(level))
            .map(|i| values[level - 1][i / space.branching()] + step(level))
            .collect();
        values.push(row);
    }
    AdaptedProcess::new(space, values).expect("shape from space")
}

/// `n` cases on binary trees of depth `1..=max_depth`, cycling through every family.
pub fn corpus(seed: u64, n: usize, max_depth: usize) -> Vec<CorpusCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|id| {
            let depth = rng.random_range(1..=max_depth.max(1));
            let family = ProcessFamily::ALL[id % ProcessFamily::ALL.len()];
            let space = random_space(&mut rng, depth);
            let process = random_process(&mut rng, &space, family);
            CorpusCase { id, family, space, process }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let a = corpus(7, 12, 4);
        let b = corpus(7, 12, 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.space, y.space);
            assert_eq!(x.process, y.process);
        }
    }

    #[test]
    fn nondecreasing_family_is_monotone() {
        for case in corpus(3, 60, 4) {
            if case.family == ProcessFamily::Nondecreasing {
                assert!(case.process.is_nondecreasing(&case.space));
            }
        }
    }
}
