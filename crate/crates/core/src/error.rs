use thiserror::Error;

use crate::index::Index;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid index entry `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("word `{0}` must be empty or start with b")]
    WordStart(String),

    #[error("index ({0}) is not admissible")]
    NotAdmissible(Index),

    #[error("operation needs a nonempty index")]
    EmptyIndex,

    #[error("slice length {j} out of range for depth {depth}")]
    SliceOutOfRange { j: usize, depth: usize },

    #[error("cannot lower the last entry of ({0}): it is 1")]
    MinusLastOfOne(Index),

    #[error("invalid parameters: {0}")]
    Domain(String),

    #[error("formula parse error at byte {pos}: {msg}")]
    Formula { pos: usize, msg: String },

    #[error("s is free in this combination; supply an integer value")]
    MissingS,

    #[error("no convergence for {what}: best estimate {estimate} with error {error:.3e}")]
    NonConvergence {
        what: String,
        estimate: String,
        error: f64,
    },
}
