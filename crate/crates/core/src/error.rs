use thiserror::Error;

/// Errors raised by the spectral solver library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point {x} lies outside the reference interval [-1, 1]")]
    Domain { x: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Newton iteration for node {index} did not converge within {iterations} iterations")]
    NodeConvergence { index: usize, iterations: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("operation requires a {expected} grid")]
    WrongFamily { expected: &'static str },

    #[error("matrix is singular (zero pivot at column {column})")]
    Singular { column: usize },

    #[error("non-finite coefficient value at x = {x}")]
    NonFiniteCoefficient { x: f64 },

    #[error("fixed-point iteration diverged after {iterations} iterations (last update {last_update:e})")]
    FixedPointDivergence { iterations: usize, last_update: f64 },

    #[error("non-finite state at step {step} (max |V| = {max_abs:e})")]
    NonFiniteState { step: usize, max_abs: f64 },

    #[error("tridiagonal eigensolver did not converge for eigenvalue {index}")]
    EigenConvergence { index: usize },

    #[error("series tail still above {tolerance:e} after the budget of {budget} terms")]
    TruncationBudget { tolerance: f64, budget: usize },

    #[error("adaptive quadrature did not reach tolerance on [{a}, {b}]")]
    QuadratureConvergence { a: f64, b: f64 },

    #[error("degenerate interval ({a}, {b})")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
