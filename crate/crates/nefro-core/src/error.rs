//! Error type shared by all pipeline stages.

use thiserror::Error;

/// Failure modes of the simulation, regression, selection, and
/// optimization operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Node placement could not satisfy the pairwise distance interval
    /// within the retry budget; the geometry is over-constrained.
    #[error("node placement infeasible after {retries} rejected candidates")]
    PlacementInfeasible { retries: usize },

    /// Polynomial degree outside the supported 1..=3 range.
    #[error("polynomial degree {0} outside supported range 1..=3")]
    DegreeOutOfRange(usize),

    /// The (regularized) Gram matrix is numerically singular.
    #[error("linear system numerically singular (condition {condition:.3e})")]
    SingularSystem { condition: f64 },

    /// A variance used as a denominator is zero.
    #[error("zero variance in input data")]
    ZeroVariance,

    /// Fewer observations than model parameters plus one.
    #[error("insufficient degrees of freedom: {n} points for {params} parameters")]
    InsufficientDof { n: usize, params: u32 },

    /// Not enough points for the requested operation.
    #[error("too few points: {n} available, {required} required")]
    TooFewPoints { n: usize, required: usize },

    /// More than N-k points coincide, so local reachability densities
    /// are undefined.
    #[error("duplicate points collapse local densities; data is degenerate")]
    DuplicateCollapse,

    /// Every candidate model scored a negative cross-validated R².
    #[error("all candidate models scored negative cross-validated R²")]
    DegenerateData,

    /// The scenario set handed to an aggregation is not the full 1..=32
    /// matrix with each scenario exactly once.
    #[error("scenario matrix incomplete: need each of scenarios 1..=32 exactly once")]
    IncompleteMatrix,

    /// Empty or inverted variable bounds.
    #[error("infeasible bounds: {0}")]
    InfeasibleBounds(String),

    /// A solve that is required to converge did not.
    #[error("solve did not converge within the iteration budget")]
    NotConverged,

    /// A pipeline stage input is missing on disk.
    #[error("missing input: {0}")]
    MissingInput(String),

    /// Filesystem failure.
    #[error("io error: {0}")]
    Io(String),

    /// Malformed serialized artifact.
    #[error("parse error: {0}")]
    Parse(String),

    /// Invalid configuration value.
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
