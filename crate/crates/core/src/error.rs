use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("rating {index} is not strictly positive: {value}")]
    NonPositiveRating { index: usize, value: f64 },

    #[error("capital shares are not on the simplex: {0}")]
    CapitalNotOnSimplex(String),

    #[error("missing wakalah terms for a wakalah contract")]
    MissingWakalahTerms,

    #[error("invalid wakalah terms: {0}")]
    InvalidWakalahTerms(String),

    #[error("investment is not viable (rho = {rho}): expected profit is negative")]
    NotViable { rho: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate risk profile: {0}")]
    Degenerate(String),

    #[error("singular linear system at column {0}")]
    Singular(usize),

    #[error("parse error: {0}")]
    Parse(String),
}
