use thiserror::Error;

/// Errors produced by distribution construction, parsing, and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad shapes, invalid probabilities, out-of-range axes.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Text-format parse failure, with the 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The convex solver exhausted its iteration budget on every restart.
    #[error(
        "solver failed to converge within {iterations} iterations \
         (best objective found: {best_value} bits, residual slope {residual})"
    )]
    SolverFailure {
        best_value: f64,
        iterations: u64,
        residual: f64,
    },

    /// The LP pivoting ran into a numerically degenerate basis.
    #[error("degenerate linear program: {0}")]
    DegenerateLp(String),

    /// The exact rational elimination exceeded its size guard.
    #[error("exact feasibility check overflowed: {0}")]
    ExactOverflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
