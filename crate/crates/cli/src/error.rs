use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Validation { field: String, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Model(bosonic_mac::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Model(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Verification(_) => 4,
        }
    }

    pub fn invalid(field: &str, reason: impl Into<String>) -> Self {
        CliError::Validation {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

/// Library field names mapped back to the flag a user typed.
fn flag_for(field: &str) -> &str {
    match field {
        "n_thermal" => "nt",
        "n_a" => "na",
        "n_b" => "nb",
        "r_a" => "ra",
        "r_b" => "rb",
        "p_a" => "pa",
        "p_b" => "pb",
        other => other,
    }
}

impl From<bosonic_mac::Error> for CliError {
    fn from(e: bosonic_mac::Error) -> Self {
        use bosonic_mac::Error as E;
        match e {
            E::InvalidParameter { name, reason } => CliError::invalid(flag_for(name), reason),
            E::SqueezingExceedsBudget { user, cost, budget } => CliError::invalid(
                if user == "Alice" { "ra" } else { "rb" },
                format!("squeezing costs {cost} photons but the budget is {budget}"),
            ),
            E::EmptyEncodings => {
                CliError::invalid("encodings", "at least one encoding is required")
            }
            other => CliError::Model(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
