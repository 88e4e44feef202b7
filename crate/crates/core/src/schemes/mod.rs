//! Scalar SDE schemes with irregular drift: tamed Euler–Maruyama, quadrature
//! errors of mesh-point sampling, and the Davie functional.

pub mod davie;
pub mod euler;
pub mod model;
pub mod quadrature;
pub mod strong;
pub mod taming;

pub use davie::{davie_functional, davie_moments, davie_samples, DavieMode, DavieMoments};
pub use euler::{solve_path, tamed_euler_solve};
pub use model::{sign0, Field, ModelId, SdeModel};
pub use quadrature::{
    quadrature_error, quadrature_modulus_proxy, quadrature_path, quadrature_summaries, ModulusProxy,
    ModulusProxyConfig, QuadratureSummary,
};
pub use strong::{dgp_ratios, strong_error, sup_process_moment, DgpRatios, SchemeRun, StrongErrorRow, StrongErrorTable};
pub use taming::{tame_drift, TamedDrift, TamingPolicy};
