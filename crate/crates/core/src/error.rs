//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state construction, criterion evaluation, and the
/// LHS harness.
#[derive(Debug, Error)]
pub enum Error {
    /// Tensor factors mix pure vectors and density operators.
    #[error("kind mismatch: tensor factors must be all pure or all density")]
    KindMismatch,

    /// An operation received an empty list where at least one element is required.
    #[error("empty input")]
    EmptyInput,

    /// `partial_trace` / `marginalize` called with nothing to keep.
    #[error("keep set is empty")]
    EmptyKeepSet,

    /// A party position outside the layout.
    #[error("party index {index} out of range for {parties} parties")]
    BadPartyIndex { index: usize, parties: usize },

    /// A scalar parameter outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operands whose dimensions or shapes do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Target and conditioning parties overlap in a conditional entropy.
    #[error("target and conditioning parties overlap")]
    BadPartition,

    /// A criterion was handed a state with the wrong party count.
    #[error("criterion requires a {expected}-party state, got {got}")]
    BadArity { expected: usize, got: usize },

    /// LHS branch weights are negative or do not sum to one.
    #[error("invalid branch weights: {0}")]
    BadWeights(String),

    /// A constructed or loaded state violates its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Unknown state family name.
    #[error("unknown state family: {0}")]
    BadFamily(String),

    /// The falsification harness found a bound violation on a model that
    /// admits an LHS decomposition. This signals a bug in the criterion
    /// engine, not physics; the offending model is attached as JSON.
    #[error("oracle failure: check `{check}` violated with margin {margin:.3e}; model: {model_json}")]
    OracleFailure {
        check: String,
        margin: f64,
        model_json: String,
    },

    /// Malformed state/observable file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Underlying I/O failure when reading or writing files.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
