//! Closed-form bounds and exact checkers that compare them with brute-force values.

pub mod bounds;
pub mod checks;
pub mod control;
pub mod report;
pub mod suite;

pub use bounds::{
    exp_vmoa_bound, jn_moment_bound, khasminskii_product, rsde_exp_bound, vmo_moment_bound, BoundParameters,
};
pub use checks::{
    energy_check, exp_vmoa_check, garsia_check, jn_moment_check, khasminskii_check, maximal_check, v1_check,
};
pub use control::{pvar_control, vmo_alpha_seminorm, OscillationControl};
pub use report::{read_jsonl, summarize, write_jsonl, CheckReport, SummaryRow, Witness};
pub use suite::{appendix_suite, exponential_suite, jn_suite, structural_suite, Case};
