//! Finite filtered probability spaces, adapted step processes and their exact moduli.

pub mod corpus;
pub mod modulus;
pub mod process;
pub mod space;
pub mod stopping;

pub use modulus::{
    kappa_exact, rho_attained, rho_exact, rho_grid, rho_optimal_stopping, rho_restarted, Attained, Method,
    ModulusOptions, OscillationData, WindowStart,
};
pub use process::{maximal_process, AdaptedProcess};
pub use space::{build_tree, FiniteFilteredSpace, NodeId, SpaceDocument, TransitionProbs};
pub use stopping::{
    enumerate_stopping_times, enumerate_stopping_times_with_cap, stopping_time_count, StoppingTime,
    DEFAULT_ENUMERATION_CAP,
};
