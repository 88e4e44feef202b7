//! p-variation controls and Hölder-type seminorms built from a grid of moduli.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `w[s][t]`: the largest `Σ ρ_{t_{i-1}, t_i}^p` over grid partitions of `[s, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillationControl {
    pub p: f64,
    pub w: Vec<Vec<f64>>,
    /// Filled by [`OscillationControl::with_vmo_alpha`].
    pub vmo_alpha_seminorm: Option<f64>,
}

impl OscillationControl {
    pub fn with_vmo_alpha(mut self, rho: &[Vec<f64>], alpha: f64, dt: f64) -> Result<Self> {
        self.vmo_alpha_seminorm = Some(vmo_alpha_seminorm(rho, alpha, dt)?);
        Ok(self)
    }

    /// Triples `(s, u, t)` where `w[s][u] + w[u][t] > w[s][t]` beyond tolerance.
    pub fn superadditivity_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.w.len();
        let mut out = Vec::new();
        for s in 0..n {
            for t in s..n {
                for u in s..=t {
                    let sum = self.w[s][u] + self.w[u][t];
                    if sum > self.w[s][t] * (1.0 + 1e-9) + 1e-12 {
                        out.push((s, u, t));
                    }
                }
            }
        }
        out
    }
}

fn check_square(rho: &[Vec<f64>]) -> Result<()> {
    if rho.iter().any(|row| row.len() != rho.len()) {
        return Err(Error::Shape("rho grid must be square".into()));
    }
    Ok(())
}

/// Interval dynamic programme over grid partitions.
///
/// `w[s][s] = 0`: a degenerate interval carries no variation, so single-point
/// partition cells are not counted (the diagonal of a modulus grid holds jumps).
pub fn pvar_control(rho: &[Vec<f64>], p: f64) -> Result<OscillationControl> {
    if !(p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p = {p} must be >= 1")));
    }
    check_square(rho)?;
    let n = rho.len();
    let mut w = vec![vec![0.0; n]; n];
    for len in 1..n {
        for s in 0..n - len {
            let t = s + len;
            let mut best = rho[s][t].powf(p);
            for u in s + 1..t {
                best = best.max(w[s][u] + w[u][t]);
            }
            w[s][t] = best;
        }
    }
    Ok(OscillationControl { p, w, vmo_alpha_seminorm: None })
}

/// `max_{s<t} ρ[s][t] / ((t - s) dt)^α`. Diagonal entries are skipped.
pub fn vmo_alpha_seminorm(rho: &[Vec<f64>], alpha: f64, dt: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must lie in (0, 1]")));
    }
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt = {dt} must be > 0")));
    }
    check_square(rho)?;
    let n = rho.len();
    let mut best: f64 = 0.0;
    for s in 0..n {
        for t in s + 1..n {
            best = best.max(rho[s][t] / (((t - s) as f64) * dt).powf(alpha));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_interval() {
        let rho = vec![vec![0.0, 3.0], vec![0.0, 0.0]];
        assert_eq!(pvar_control(&rho, 2.0).unwrap().w[0][1], 9.0);
    }

    #[test]
    fn refinement_wins_for_p_one() {
        let rho = vec![vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 1.0], vec![0.0; 3]];
        assert_eq!(pvar_control(&rho, 1.0).unwrap().w[0][2], 2.0);
    }

    #[test]
    fn whole_interval_wins_for_p_two() {
        let rho = vec![vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 1.0], vec![0.0; 3]];
        assert_eq!(pvar_control(&rho, 2.0).unwrap().w[0][2], 4.0);
    }

    #[test]
    fn seminorm_examples() {
        let zero = vec![vec![0.0; 4]; 4];
        assert_eq!(vmo_alpha_seminorm(&zero, 0.5, 0.1).unwrap(), 0.0);
        let dt = 0.25;
        let lin: Vec<Vec<f64>> = (0..5)
            .map(|s| (0..5).map(|t| if t >= s { (t - s) as f64 * dt } else { 0.0 }).collect())
            .collect();
        assert!((vmo_alpha_seminorm(&lin, 1.0, dt).unwrap() - 1.0).abs() < 1e-15);
        let root: Vec<Vec<f64>> = lin.iter().map(|r| r.iter().map(|x| x.sqrt()).collect()).collect();
        assert!((vmo_alpha_seminorm(&root, 0.5, dt).unwrap() - 1.0).abs() < 1e-15);
    }
}
