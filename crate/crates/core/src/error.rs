use thiserror::Error;

/// Errors raised by the channel model, rate formulas and probes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("entropy argument {0} is negative (unphysical photon number)")]
    NegativeEntropyArgument(f64),

    #[error("{user} squeezing costs {cost} photons but the budget is only {budget}")]
    SqueezingExceedsBudget {
        user: &'static str,
        cost: f64,
        budget: f64,
    },

    #[error("formula requires coherent inputs (r_A = r_B = 0), got r_A = {r_a}, r_B = {r_b}")]
    SqueezingNotAllowed { r_a: f64, r_b: f64 },

    #[error("formula divides by zero: {0}")]
    DegenerateChannel(&'static str),

    #[error("bound is unbounded: {0}")]
    Unbounded(&'static str),

    #[error("mode index {index} out of range for a {num_modes}-mode network")]
    ModeOutOfRange { index: usize, num_modes: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("beamsplitter {0} has a non-zero phase; only real transforms are supported")]
    NonzeroPhase(usize),

    #[error("at least one encoding is required to build a region")]
    EmptyEncodings,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
