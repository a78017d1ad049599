//! Library side of the `qflag` command: expression parsing and the
//! `reduce`, `verify`, `mk` and `approx` commands.

pub mod commands;
pub mod expr;

pub use commands::{cmd_approx, cmd_mk, cmd_reduce, cmd_verify, Mode, RunConfig};
pub use expr::{eval_expr, parse_expr, Expr};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qflag_core::Error),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("{0} check(s) failed")]
    Verify(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 for failed checks, 2 for bad input, 3 when an
    /// expression needs a larger completion bound.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Core(qflag_core::Error::BoundExceeded { .. }) => 3,
            CliError::Core(qflag_core::Error::Parse(_) | qflag_core::Error::IndexOutOfRange(_)) => 2,
            CliError::Core(qflag_core::Error::InvalidArgument(_)) => 2,
            CliError::Assertion(_) | CliError::Verify(_) | CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}
