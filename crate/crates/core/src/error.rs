use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },

    #[error("unknown symbol `{name}` (line {line})")]
    UnknownSymbol { name: String, line: usize },

    #[error("degree mismatch at line {line}: {message}")]
    DegreeMismatch { line: usize, message: String },

    #[error("the fundamental form is not real")]
    NonRealOmega,

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("`{0}` is not invertible")]
    NotInvertible(String),

    #[error("exterior derivative of symbol `{0}` is opaque")]
    OpaqueDerivative(String),

    #[error("operation requires unitary mode (omega = (i*c/2)*sum phi{{j,j}})")]
    NotUnitaryMode,

    #[error("operation requires constant structure coefficients")]
    NotConstantCoefficient,

    #[error("internal cross-check failed: {0}")]
    CrossCheckMismatch(String),

    #[error("subspaces live in different ambient spaces ({0} vs {1})")]
    AmbientMismatch(String, String),

    #[error("unknown catalog entry `{0}`")]
    UnknownKey(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("linear solve failed: {0}")]
    SolveFailure(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
