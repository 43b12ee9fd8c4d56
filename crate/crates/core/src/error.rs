use thiserror::Error;

/// Errors raised while building, simulating, evaluating or optimizing a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Well-formed JSON that does not match the expected schema.
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },

    /// A value is outside its admissible domain.
    #[error("invalid value at `{path}`: {message}")]
    Validation { path: String, message: String },

    /// A damage schedule produced a non-positive scale parameter.
    #[error("invalid damage schedule: scale {scale} at shock {index} is not positive")]
    InvalidSchedule { index: u64, scale: f64 },

    /// A replacement level lies above the initial strength.
    #[error("invalid level: {level} exceeds the initial strength {initial}")]
    InvalidLevel { level: f64, initial: f64 },

    /// The requested operation is not available for this model.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A simulated lifetime hit the per-replication shock cap.
    #[error(
        "replication {replication} did not terminate within {shocks} shocks \
         (time {time}, accumulated damage {damage})"
    )]
    NonTerminating {
        replication: u64,
        shocks: u64,
        time: f64,
        damage: f64,
    },

    /// The search space contains no feasible candidate.
    #[error("infeasible search space: {0}")]
    InfeasibleSpace(String),

    /// A numerical routine failed to reach its tolerance or produced inconsistent output.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
