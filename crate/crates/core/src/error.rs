//! Error type shared by every module of the crate.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual or JSON input.
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    /// Parsed input that violates a structural invariant.
    #[error("invalid gluing data: {0}")]
    Validation(String),

    /// A fundamental ray has zero self double-arc and non-positive `-χ`,
    /// so the index sum does not converge.
    #[error("triangulation is not 1-efficient: ray {witness:?} has δ = 0 and -χ = {neg_chi_half}/2")]
    NotOneEfficient { witness: Vec<i64>, neg_chi_half: i64 },

    /// The Dehn-filling sum has a direction along which the degree bound
    /// does not grow.
    #[error("Gang-Yonekura sum diverges along {witness:?}")]
    GyDivergent { witness: Vec<i64> },

    /// A truncation range could not be certified.
    #[error("cannot certify truncation: {0}")]
    Uncertified(String),

    /// Arguments outside the domain of an operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A relative-index table lacks an entry required by a gluing sum.
    #[error("table does not cover boundary triple {0:?}; widen the table")]
    UncoveredTable([i64; 3]),

    /// Unknown fixture name.
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    /// File system failure while loading external data.
    #[error("i/o error: {0}")]
    Io(String),

    /// A consistency check inside the engine failed.
    #[error("internal error: {0}")]
    Internal(String),
}
