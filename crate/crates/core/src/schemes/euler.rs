//! Tamed Euler–Maruyama with coefficients frozen at the mesh `{j / n}`.

use super::model::SdeModel;
use super::taming::{tame_drift, TamedDrift, TamingPolicy};
use crate::error::{Error, Result};
use crate::mc::paths::{PathEnsemble, DEFAULT_MATERIALIZE_CAP};

/// One path of `X^n` on the fine grid, driven by fine increments `dw`.
///
/// Inside mesh cell `j` the state argument of `b^n` and `σ` stays at
/// `X^n_{j/n}`; the time argument follows the fine grid.
pub fn solve_path(model: &SdeModel, drift: &TamedDrift, steps_per_cell: usize, dt: f64, dw: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(dw.len() + 1);
    let mut x = model.x0;
    let mut frozen = x;
    out.push(x);
    for (k, dwk) in dw.iter().enumerate() {
        if k % steps_per_cell == 0 {
            frozen = x;
        }
        let t = k as f64 * dt;
        x += drift.eval(t, frozen) * dt + model.diffusion.eval(t, frozen) * dwk;
        out.push(x);
    }
    out
}

/// `X^n` for every path of a one-dimensional ensemble, on the fine grid.
pub fn tamed_euler_solve(model: &SdeModel, taming: &TamingPolicy, n: usize, ensemble: &PathEnsemble) -> Result<Vec<Vec<f64>>> {
    if ensemble.dim != 1 {
        return Err(Error::InvalidParameter(format!("scalar schemes need dim = 1, got {}", ensemble.dim)));
    }
    let requested = ensemble.n_paths as u128 * (ensemble.n_steps as u128 + 1);
    if requested > DEFAULT_MATERIALIZE_CAP {
        return Err(Error::ResourceCap { requested, cap: DEFAULT_MATERIALIZE_CAP });
    }
    let spc = ensemble.steps_per_cell(n)?;
    let drift = tame_drift(&model.drift, n, f64::INFINITY, taming)?;
    let dt = ensemble.dt();
    Ok(ensemble.par_map(|i| solve_path(model, &drift, spc, dt, &ensemble.increments(i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::paths::brownian_paths;
    use crate::schemes::model::{Field, ModelId};

    #[test]
    fn zero_drift_reproduces_brownian_path() {
        let e = brownian_paths(3, 64, 1, 1.0, 7).unwrap();
        let model = SdeModel::new("bm", Field::Constant(0.0), Field::Constant(1.0), 0.5);
        let xs = tamed_euler_solve(&model, &TamingPolicy::default(), 8, &e).unwrap();
        for (i, x) in xs.iter().enumerate() {
            assert_eq!(x, &e.path_from(i, 0.5));
        }
    }

    #[test]
    fn constant_drift_adds_linear_term() {
        let e = brownian_paths(2, 64, 1, 1.0, 3).unwrap();
        let model = SdeModel::preset(ModelId::Constant);
        let xs = tamed_euler_solve(&model, &TamingPolicy::Identity, 4, &e).unwrap();
        let b = e.path(1);
        for (k, x) in xs[1].iter().enumerate() {
            assert!((x - (k as f64 / 64.0 + b[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn linear_ode_is_explicit_euler_on_the_mesh() {
        let e = brownian_paths(1, 40, 1, 1.0, 0).unwrap();
        let model = SdeModel::preset(ModelId::Linear);
        let x = &tamed_euler_solve(&model, &TamingPolicy::default(), 10, &e).unwrap()[0];
        for j in 0..=10 {
            assert!((x[4 * j] - 0.9f64.powi(j as i32)).abs() < 1e-12);
        }
    }

    #[test]
    fn mesh_must_be_refined() {
        let e = brownian_paths(1, 30, 1, 1.0, 0).unwrap();
        let model = SdeModel::preset(ModelId::Zero);
        assert!(matches!(
            tamed_euler_solve(&model, &TamingPolicy::default(), 8, &e),
            Err(Error::MeshMismatch { fine: 30, coarse: 8 })
        ));
    }
}
