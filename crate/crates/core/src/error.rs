use std::fmt;

use thiserror::Error;

/// A problem found while validating a model file or a raw family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    DuplicateState { label: String },
    UnknownState { label: String, context: String },
    MissingState { label: String },
    EmptySet { state: String },
    NegativeMass { state: String, pmf: usize, target: String, value: String },
    BadSum { state: String, pmf: usize, sum: String },
    BadRational { state: String, pmf: usize, target: String, text: String },
    EmptyStateSpace,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateState { label } => write!(f, "state `{label}` is listed more than once"),
            Self::UnknownState { label, context } => {
                write!(f, "unknown state `{label}` in {context}")
            }
            Self::MissingState { label } => write!(f, "state `{label}` has no credal set"),
            Self::EmptySet { state } => write!(f, "state `{state}` has an empty set of pmfs"),
            Self::NegativeMass { state, pmf, target, value } => write!(
                f,
                "pmf #{pmf} of state `{state}` puts negative mass {value} on `{target}`"
            ),
            Self::BadSum { state, pmf, sum } => {
                write!(f, "pmf #{pmf} of state `{state}` sums to {sum}, not 1")
            }
            Self::BadRational { state, pmf, target, text } => write!(
                f,
                "pmf #{pmf} of state `{state}`: `{text}` (mass on `{target}`) is not a rational"
            ),
            Self::EmptyStateSpace => write!(f, "the state space is empty"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} values, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid state {0}")]
    InvalidState(String),

    #[error("model does not validate:\n{}", format_list(.0))]
    Validation(Vec<ValidationError>),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("cannot parse rational `{0}`")]
    Rational(String),

    #[error("unsupported operator: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("restriction is not well defined: no pmf of state `{state}` is supported in the class")]
    NotWellDefined { state: String },

    #[error("decomposition stopped after {completed} level(s): {reason}")]
    IncompleteDecomposition {
        completed: usize,
        levels: Vec<crate::decomposition::Level>,
        reason: String,
    },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("bad function spec `{0}`")]
    FunctionSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_list(errors: &[ValidationError]) -> String {
    errors.iter().map(|e| format!("  - {e}")).collect::<Vec<_>>().join("\n")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
