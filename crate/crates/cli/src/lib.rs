//! Config-driven runner for the bmoforge experiments.

pub mod config;
pub mod manifest;
pub mod report;
pub mod runner;

pub use config::{parse_config, parse_config_with, ConfigError, ExperimentConfig, ExperimentKind};
pub use manifest::RunManifest;
pub use report::report_summary;
pub use runner::run_experiment;
