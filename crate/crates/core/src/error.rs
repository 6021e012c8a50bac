//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("covariate dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("horizon {horizon} is below the minimal admissible horizon {minimum}")]
    HorizonTooShort { horizon: usize, minimum: usize },

    #[error(
        "coarsening duration tau = {tau:.3} does not fit inside horizon T = {horizon}; \
         the horizon is too short for the requested class"
    )]
    CoarseningExceedsHorizon { tau: f64, horizon: usize },

    #[error("assignment probability for arm {arm} is {value}; the exploration mixture is mis-set")]
    NonPositiveProbability { arm: usize, value: f64 },

    #[error("non-finite score for expert {expert}")]
    NonFiniteScore { expert: usize },

    #[error("outcome {value} at period {period} violates the [0, {cap}] envelope")]
    OutcomeOutOfRange { period: usize, value: f64, cap: f64 },

    #[error("environment supplies {available} periods but {needed} are required")]
    EnvironmentExhausted { needed: usize, available: usize },

    #[error("trajectory carries no counterfactual outcomes; use realized-welfare mode")]
    MissingCounterfactuals,

    #[error("coarsening produced a degenerate class of {cells} cells")]
    DegenerateCoarsening { cells: usize },

    #[error("covariate vector is not present in the table expert")]
    UnknownCovariate,

    #[error("empty {what}")]
    Empty { what: &'static str },

    #[error("{what} overflows the supported integer width")]
    Overflow { what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("row {row}: {message}")]
    Malformed { row: usize, message: String },

    #[error("catalog does not match the coarsening covariates: {0}")]
    CatalogMismatch(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
