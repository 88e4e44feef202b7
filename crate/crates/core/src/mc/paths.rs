//! Seeded Brownian ensembles on a uniform fine grid.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::StreamKey;
use crate::error::{Error, Result};

/// Default ceiling on the number of stored values when an ensemble is materialized.
pub const DEFAULT_MATERIALIZE_CAP: u128 = 1 << 28;

/// `n_paths` independent `dim`-dimensional Brownian paths on `[0, horizon]`
/// with `n_steps` equal steps.
///
/// Increments are regenerated from the path's own stream on every access,
/// so memory stays proportional to one path per worker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    pub n_paths: usize,
    pub n_steps: usize,
    pub dim: usize,
    pub horizon: f64,
    pub seed: u64,
}

pub fn brownian_paths(n_paths: usize, n_steps: usize, dim: usize, horizon: f64, seed: u64) -> Result<PathEnsemble> {
    if n_paths == 0 || n_steps == 0 || dim == 0 {
        return Err(Error::InvalidParameter(format!(
            "counts must be >= 1: n_paths = {n_paths}, n_steps = {n_steps}, dim = {dim}"
        )));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon = {horizon} must be positive")));
    }
    Ok(PathEnsemble { n_paths, n_steps, dim, horizon, seed })
}

impl PathEnsemble {
    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    fn key(&self) -> StreamKey {
        StreamKey::new(self.seed)
    }

    /// Increments of path `i`, step-major: `[step * dim + coord]`.
    pub fn increments(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.n_steps * self.dim];
        self.fill_increments(i, &mut out);
        out
    }

    pub fn fill_increments(&self, i: usize, out: &mut [f64]) {
        let sd = self.dt().sqrt();
        let mut rng = self.key().rng(i as u64);
        for z in out.iter_mut() {
            *z = sd * rng.sample::<f64, _>(StandardNormal);
        }
    }

    /// Values `B_0 = start, B_dt, ..., B_T` of a one-dimensional path.
    pub fn path_from(&self, i: usize, start: f64) -> Vec<f64> {
        debug_assert_eq!(self.dim, 1);
        let mut out = Vec::with_capacity(self.n_steps + 1);
        let mut x = start;
        out.push(x);
        for dw in self.increments(i) {
            x += dw;
            out.push(x);
        }
        out
    }

    pub fn path(&self, i: usize) -> Vec<f64> {
        self.path_from(i, 0.0)
    }

    /// Applies `f` to every path index in parallel; results come back in path order.
    pub fn par_map<T: Send>(&self, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
        (0..self.n_paths).into_par_iter().map(f).collect()
    }

    /// All increments, path-major, if their count stays within `cap`.
    pub fn materialize(&self, cap: u128) -> Result<Vec<f64>> {
        let requested = self.n_paths as u128 * self.n_steps as u128 * self.dim as u128;
        if requested > cap {
            return Err(Error::ResourceCap { requested, cap });
        }
        let per = self.n_steps * self.dim;
        let mut out = vec![0.0; self.n_paths * per];
        out.par_chunks_mut(per)
            .enumerate()
            .for_each(|(i, chunk)| self.fill_increments(i, chunk));
        Ok(out)
    }

    /// Fine steps per cell of the mesh `{j / n}`, if the fine grid refines it.
    pub fn steps_per_cell(&self, n: usize) -> Result<usize> {
        let cells = self.horizon * n as f64;
        let rounded = cells.round();
        let mismatch = Error::MeshMismatch { fine: self.n_steps, coarse: n };
        if n == 0 || rounded < 1.0 || (cells - rounded).abs() > 1e-9 * cells.max(1.0) {
            return Err(mismatch);
        }
        let cells = rounded as usize;
        if self.n_steps % cells != 0 {
            return Err(mismatch);
        }
        Ok(self.n_steps / cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_increments() {
        let e = brownian_paths(4, 16, 2, 1.0, 9).unwrap();
        assert_eq!(e.materialize(1 << 20).unwrap(), e.materialize(1 << 20).unwrap());
        assert_eq!(e.increments(2), e.increments(2));
    }

    #[test]
    fn materialize_respects_cap() {
        let e = brownian_paths(1000, 1000, 1, 1.0, 0).unwrap();
        assert!(matches!(e.materialize(10), Err(Error::ResourceCap { requested: 1_000_000, cap: 10 })));
    }

    #[test]
    fn mesh_refinement() {
        let e = brownian_paths(1, 4096, 1, 1.0, 0).unwrap();
        assert_eq!(e.steps_per_cell(64).unwrap(), 64);
        assert!(e.steps_per_cell(3).is_err());
        let half = brownian_paths(1, 100, 1, 0.5, 0).unwrap();
        assert_eq!(half.steps_per_cell(10).unwrap(), 20);
    }

    #[test]
    fn rejects_empty_shapes() {
        assert!(brownian_paths(0, 1, 1, 1.0, 0).is_err());
        assert!(brownian_paths(1, 1, 1, 0.0, 0).is_err());
    }
}
