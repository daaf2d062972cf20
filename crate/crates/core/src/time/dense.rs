use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{LinearSolve, Matrix};
use crate::scalar::Real;

use super::SemidiscreteSystem;

/// Forcing `g(t)` written into an output slice.
pub type ForcingFn<T> = Arc<dyn Fn(T, &mut [T]) + Send + Sync>;

/// Linear system `M V' = L V + g(t)` with dense `M` and `L`.
#[derive(Clone)]
pub struct DenseLinearSystem<T> {
    pub mass: Matrix<T>,
    pub linear: Matrix<T>,
    pub forcing: Option<ForcingFn<T>>,
}

impl<T: Real> DenseLinearSystem<T> {
    pub fn new(mass: Matrix<T>, linear: Matrix<T>) -> Self {
        assert!(mass.is_square() && linear.is_square() && mass.rows() == linear.rows());
        Self {
            mass,
            linear,
            forcing: None,
        }
    }

    pub fn with_forcing(mut self, g: impl Fn(T, &mut [T]) + Send + Sync + 'static) -> Self {
        self.forcing = Some(Arc::new(g));
        self
    }
}

impl<T: Real> SemidiscreteSystem<T> for DenseLinearSystem<T> {
    fn dim(&self) -> usize {
        self.mass.rows()
    }

    fn is_linear(&self) -> bool {
        true
    }

    fn apply_mass(&self, v: &[T], out: &mut [T]) {
        self.mass.mul_vec_into(v, out);
    }

    fn factor_mass(&self) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(self.mass.lu()?))
    }

    fn rhs(&self, v: &[T], t: T, out: &mut [T]) -> Result<()> {
        let mut g = vec![T::zero(); out.len()];
        self.forcing(t, &mut g);
        self.linear.mul_vec_into(v, out);
        for (o, g) in out.iter_mut().zip(g) {
            *o += g;
        }
        Ok(())
    }

    fn factor_shifted(&self, shift: T) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(self.mass.add_scaled(-shift, &self.linear).lu()?))
    }

    fn forcing(&self, t: T, out: &mut [T]) {
        match &self.forcing {
            Some(g) => g(t, out),
            None => out.fill(T::zero()),
        }
    }
}
