use thiserror::Error;

use crate::board::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: ids out of range, non-canonical edges, bad syntax.
    #[error("format error: {0}")]
    Format(String),
    /// Parse error with a 1-based line number.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A structure that an operation requires to be valid is not.
    #[error("invalid structure: {0}")]
    Invalid(ValidationReport),
    /// A triangle relation fails one of its axioms.
    #[error("triangle axiom {axiom} fails at {witness}")]
    Triangle { axiom: u8, witness: String },
    /// Formula syntax or arity error at a 1-based column.
    #[error("column {col}: {msg}")]
    Syntax { col: usize, msg: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
}
