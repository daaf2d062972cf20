//! Small dense and tridiagonal linear algebra kernels.

mod dense;
mod tridiag;

pub use dense::{Lu, Matrix};
pub use tridiag::{symmetric_tridiagonal_eigenvalues, Tridiagonal};

/// A factorized linear operator that can solve `A x = b` in place.
pub trait LinearSolve<T>: Send + Sync {
    fn dim(&self) -> usize;
    /// Overwrites `rhs` with the solution.
    fn solve_in_place(&self, rhs: &mut [T]);
}
