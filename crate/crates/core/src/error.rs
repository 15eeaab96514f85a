use thiserror::Error;

use crate::solver::Status;

#[derive(Debug, Error)]
pub enum DroError {
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("scenario {scenario} has an empty intersection with the support")]
    EmptyIntersection { scenario: usize },

    #[error("support polytope is unbounded along coordinate {coordinate}")]
    UnboundedSupport { coordinate: usize },

    #[error("data point {index} lies outside the support (violation {violation:e})")]
    DataOutsideSupport { index: usize, violation: f64 },

    #[error("integer variable {var} has no finite upper bound")]
    MissingIntegerBound { var: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("cardinality h = {h} is not in 1..={n}")]
    BadCardinality { n: usize, h: usize },

    #[error("enumeration over {vars} binary variables exceeds the limit of {limit} points")]
    TooLarge { vars: usize, limit: u64 },

    #[error("mean {mean} is outside the admissible interval ({lo}, {hi}) for sigma = {sigma}")]
    MeanOutOfRange {
        mean: f64,
        sigma: f64,
        lo: f64,
        hi: f64,
    },

    #[error("historical decisions {first} and {second} overlap at component {component}")]
    Overlapping {
        first: usize,
        second: usize,
        component: usize,
    },

    #[error("nominal optimum is zero; relative loss undefined")]
    DegenerateDenominator,

    #[error("empty input")]
    EmptyInput,

    #[error("solver finished with status {0:?}")]
    Solver(Status),

    #[error("decision returned by the solver violates the feasible set by {0:e}")]
    InfeasibleDecision(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = DroError> = std::result::Result<T, E>;
