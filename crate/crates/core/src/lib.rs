//! Exact and Monte Carlo tools for processes of bounded mean oscillation.
//!
//! * [`filtration`]: probability trees, adapted step processes, stopping times,
//!   and exact moduli of mean oscillation.
//! * [`analysis`]: closed-form bounds and exact checkers that compare them
//!   against brute-force values.
//! * [`mc`]: seeded Brownian ensembles and nested conditional-moment estimators.
//! * [`schemes`]: tamed Euler–Maruyama, quadrature errors, the Davie functional.

pub mod error;
pub mod analysis;
pub mod filtration;
pub mod mc;
pub mod numeric;
pub mod schemes;

pub use error::{Error, Result};
