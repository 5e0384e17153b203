use thiserror::Error;

use crate::label::ActionLabel;

/// Errors produced by construction, composition and checking.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid action label {0:?}")]
    InvalidLabel(String),

    #[error("label `{0}` is not in the declared alphabet")]
    UnknownLabel(ActionLabel),

    #[error("state index {index} out of range (LTS has {num_states} states)")]
    StateOutOfRange { index: usize, num_states: usize },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("conflicting definitions: {0}")]
    Conflict(String),

    #[error("unknown internal state `{0}`")]
    UnknownInternalState(String),

    #[error("renaming is not injective: `{first}` and `{second}` both map to `{target}`")]
    NotInjective {
        first: ActionLabel,
        second: ActionLabel,
        target: ActionLabel,
    },

    #[error("fresh label `{0}` clashes with a label already used by the processes")]
    FreshLabelClash(ActionLabel),

    #[error("word of length {length} exceeds horizon {horizon}")]
    HorizonExceeded { length: usize, horizon: usize },

    #[error("trivial property: {0}")]
    TrivialProperty(String),

    #[error("invalid tester specification: {0}")]
    InvalidTester(String),

    #[error("unsupported witness: {0}")]
    UnsupportedWitness(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
