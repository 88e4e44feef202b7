use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("level {level} out of range 0..={depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("invalid window [{start}, {end}] for depth {depth}")]
    Window { start: usize, end: usize, depth: usize },

    #[error("enumeration infeasible: {count:.0} stopping times exceed the cap of {cap}")]
    EnumerationInfeasible { count: f64, cap: u64 },

    #[error("partition too coarse: lambda * rho = {product} >= 1 on cell {cell}")]
    PartitionTooCoarse { cell: usize, product: f64 },

    #[error("process is not nondecreasing: {0}")]
    NotNondecreasing(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mesh mismatch: fine grid of {fine} steps does not refine a mesh of {coarse}")]
    MeshMismatch { fine: usize, coarse: usize },

    #[error("resource cap exceeded: {requested} values requested, cap is {cap}")]
    ResourceCap { requested: u128, cap: u128 },

    #[error("empty sample")]
    EmptySamples,
}
