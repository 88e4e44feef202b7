//! Seeded Monte Carlo: Brownian ensembles, nested conditional moments, rate fits.

pub mod estimate;
pub mod nested;
pub mod paths;
pub mod rng;

pub use estimate::{exp_moment, moment_estimate, rate_fit, EssSupProxy, ExpMoment, MomentEstimate, RateFit};
pub use nested::{empirical_rho_grid, markov_conditional_moment, EmpiricalGrid, NestedConfig};
pub use paths::{brownian_paths, PathEnsemble};
