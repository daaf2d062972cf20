use crate::error::{Error, Result};
use crate::linalg::LinearSolve;
use crate::scalar::Real;

/// Semidiscrete system `M dV/dt = R(V, t)` with a constant, invertible `M`.
///
/// Linear systems additionally split `R(V, t) = L V + g(t)` and can factor the
/// shifted operator `M - σ L` used by every implicit stage.
pub trait SemidiscreteSystem<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn is_linear(&self) -> bool;

    fn apply_mass(&self, v: &[T], out: &mut [T]);

    fn factor_mass(&self) -> Result<Box<dyn LinearSolve<T>>>;

    fn rhs(&self, v: &[T], t: T, out: &mut [T]) -> Result<()>;

    /// Factors `M - shift * L`. Only meaningful for linear systems.
    fn factor_shifted(&self, shift: T) -> Result<Box<dyn LinearSolve<T>>> {
        let _ = shift;
        Err(Error::InvalidArgument(
            "shifted factorization requires a linear system".into(),
        ))
    }

    /// `g(t)` in `R(V, t) = L V + g(t)`.
    fn forcing(&self, t: T, out: &mut [T]) {
        let _ = t;
        out.fill(T::zero());
    }
}
