use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto exit codes: `Parse` → 2,
/// `Invalid` → 3, `CapExceeded` → 4. Theorem failures are not errors; they are
/// FAIL verdicts carried inside reports (exit code 1 at the CLI level).
#[derive(Debug, Error)]
pub enum Error {
    /// Structurally malformed input: bad JSON shape, unknown builtin family,
    /// out-of-range indices in a table or map file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input that parses but violates an algebraic precondition, with a
    /// witness where one exists (e.g. the associativity triple that fails).
    #[error("invalid algebraic input: {0}")]
    Invalid(String),

    /// An operation refused to run because a size cap or scan budget was
    /// exceeded. Operations never fall back to sampling.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
    pub fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
