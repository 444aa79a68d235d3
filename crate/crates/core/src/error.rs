use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("state budget of {limit} exceeded ({explored} states explored)")]
    BudgetExceeded { limit: usize, explored: usize },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("length mismatch: word of length {word}, formula of length {formula}")]
    LengthMismatch { word: usize, formula: usize },
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("block `{block}`: {message}")]
    Validation { block: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn validation(block: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            block: block.into(),
            message: message.into(),
        }
    }
}

/// Counts generated states against a caller-supplied limit.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn charge(&mut self, n: usize) -> Result<()> {
        self.used += n;
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                limit: self.limit,
                explored: self.used,
            })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> usize {
        self.used
    }

    pub fn limit(&self) -> usize {
        self.limit
    }
}
