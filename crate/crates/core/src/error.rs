use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {field}: {reason}")]
    Validation { field: &'static str, reason: String },

    #[error("{what} = {value} is outside {lo}..={hi}")]
    Range {
        what: &'static str,
        value: i64,
        lo: i64,
        hi: i64,
    },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: member {value} lies outside the window [1, {window_len}]")]
    OutOfWindow {
        line: usize,
        value: u64,
        window_len: usize,
    },

    #[error("pair ({i}, {j}) addresses a block outside the window")]
    BlockOutOfWindow { i: usize, j: usize },

    #[error("stage `{stage}` failed: {reason}")]
    Stage { stage: &'static str, reason: String },

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn range(what: &'static str, value: usize, lo: usize, hi: usize) -> Self {
        Error::Range {
            what,
            value: value as i64,
            lo: lo as i64,
            hi: hi as i64,
        }
    }
}
