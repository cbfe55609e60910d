use serde::Serialize;
use thiserror::Error;

use crate::hypocoercivity::EntropyParams;

pub type Result<T> = std::result::Result<T, Error>;

/// A single failed admissibility check on a parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ParamIssue {
    /// An inequality `lhs <relation> rhs` that does not hold.
    ConstraintViolation { name: String, lhs: f64, rhs: f64 },
    NonPositive { name: String, value: f64 },
    NonFinite { name: String },
}

impl std::fmt::Display for ParamIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParamIssue::ConstraintViolation { name, lhs, rhs } => {
                write!(f, "{name}: lhs = {lhs:.6e}, rhs = {rhs:.6e}")
            }
            ParamIssue::NonPositive { name, value } => write!(f, "{name} = {value} must be > 0"),
            ParamIssue::NonFinite { name } => write!(f, "{name} is not finite"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {}", .0.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidParams(Vec<ParamIssue>),

    #[error("{name} = {value} must be > 0")]
    NonPositive { name: &'static str, value: f64 },

    #[error("non-positive temperature {name} = {value}")]
    NonPositiveTemperature { name: &'static str, value: f64 },

    #[error("degenerate density n = {n:.3e}")]
    DegenerateDensity { n: f64 },

    #[error("Hermite order {order} outside basis range 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("rk4 step too large: dt*|A| = {product:.3e} exceeds {bound}")]
    StepSizeTooLarge { product: f64, bound: f64 },

    #[error("matrix P_k not positive definite at k = {k} (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { k: usize, min_eigenvalue: f64 },

    #[error("eigenvalue solver did not converge: {0}")]
    NonConvergence(String),

    #[error("parameters violate the decay-theorem normalization (row sums {row1}, {row2})")]
    NotTheoremEligible { row1: f64, row2: f64 },

    #[error("no positive modal rate found within budget (best mu = {mu:.3e} at {best:?})")]
    SearchFailed { best: EntropyParams, mu: f64 },

    #[error("velocity grid too coarse: {points_per_width:.2} points per thermal width (need >= 8)")]
    GridTooCoarse { points_per_width: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed field file: {0}")]
    FieldFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
