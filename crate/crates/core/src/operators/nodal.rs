use std::sync::Arc;

use crate::error::Result;
use crate::linalg::{LinearSolve, Matrix};
use crate::problems::{Flux, ScalarFn2};
use crate::scalar::Real;
use crate::spectral::{GaussLobattoGrid, NodalField};
use crate::time::SemidiscreteSystem;

/// Interior-node system shared by G-NI and collocation:
///
/// ```text
/// M dṼ/dt = L [V] + Q f(x, [V]) + s ⊙ F(x̃, t)
/// ```
///
/// where `[V]` is the full nodal vector with the boundary entries pinned.
/// `L` and `Q` act on full vectors; their boundary columns only ever see the
/// pinned values.
#[derive(Clone)]
pub struct NodalSystem<T> {
    pub(crate) grid: Arc<GaussLobattoGrid<T>>,
    pub(crate) mass: Matrix<T>,
    pub(crate) linear: Matrix<T>,
    pub(crate) flux_op: Option<(Matrix<T>, Flux<T>)>,
    pub(crate) source: Option<ScalarFn2<T>>,
    pub(crate) source_weights: Vec<T>,
    pub(crate) pinned: (T, T),
    /// Added to the full nodal vector to recover the solution (boundary lift).
    pub(crate) offset: Vec<T>,
    pub(crate) initial: Vec<T>,
}

impl<T: Real> NodalSystem<T> {
    pub fn grid(&self) -> &Arc<GaussLobattoGrid<T>> {
        &self.grid
    }

    pub fn mass_matrix(&self) -> &Matrix<T> {
        &self.mass
    }

    /// Linear operator restricted to interior columns.
    pub fn linear_matrix(&self) -> Matrix<T> {
        let rows: Vec<usize> = (0..self.dim()).collect();
        let cols: Vec<usize> = self.grid.interior().collect();
        self.linear.select(&rows, &cols)
    }

    /// Flux operator on full vectors, if the problem has a flux term.
    pub fn flux_matrix(&self) -> Option<&Matrix<T>> {
        self.flux_op.as_ref().map(|(q, _)| q)
    }

    pub fn boundary_values(&self) -> (T, T) {
        self.pinned
    }

    /// Interior unknowns at `t = 0`.
    pub fn initial_state(&self) -> Vec<T> {
        self.initial.clone()
    }

    /// Full nodal vector of the system unknowns, boundary entries pinned.
    pub fn embed(&self, v: &[T]) -> Vec<T> {
        let mut full = Vec::with_capacity(v.len() + 2);
        full.push(self.pinned.0);
        full.extend_from_slice(v);
        full.push(self.pinned.1);
        full
    }

    /// Nodal values of the solution on the reference grid, including any lift.
    pub fn solution_values(&self, v: &[T]) -> Vec<T> {
        let mut full = self.embed(v);
        for (u, o) in full.iter_mut().zip(&self.offset) {
            *u += *o;
        }
        full
    }

    pub fn solution_field(&self, v: &[T]) -> NodalField<T> {
        NodalField {
            grid: Arc::clone(&self.grid),
            values: self.solution_values(v),
        }
    }

    fn add_source(&self, t: T, out: &mut [T]) {
        if let Some(src) = &self.source {
            let x = self.grid.nodes();
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.source_weights[j] * src(x[j + 1], t);
            }
        }
    }
}

impl<T: Real> SemidiscreteSystem<T> for NodalSystem<T> {
    fn dim(&self) -> usize {
        self.mass.rows()
    }

    fn is_linear(&self) -> bool {
        self.flux_op.is_none()
    }

    fn apply_mass(&self, v: &[T], out: &mut [T]) {
        self.mass.mul_vec_into(v, out);
    }

    fn factor_mass(&self) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(self.mass.lu()?))
    }

    fn rhs(&self, v: &[T], t: T, out: &mut [T]) -> Result<()> {
        let full = self.embed(v);
        self.linear.mul_vec_into(&full, out);
        if let Some((q, flux)) = &self.flux_op {
            let x = self.grid.nodes();
            let fv: Vec<T> = full
                .iter()
                .zip(x)
                .map(|(&u, &xi)| flux.eval(xi, u))
                .collect();
            let mut tmp = vec![T::zero(); out.len()];
            q.mul_vec_into(&fv, &mut tmp);
            for (o, q) in out.iter_mut().zip(tmp) {
                *o += q;
            }
        }
        self.add_source(t, out);
        Ok(())
    }

    fn factor_shifted(&self, shift: T) -> Result<Box<dyn LinearSolve<T>>> {
        Ok(Box::new(
            self.mass.add_scaled(-shift, &self.linear_matrix()).lu()?,
        ))
    }

    fn forcing(&self, t: T, out: &mut [T]) {
        let n = self.grid.degree();
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.linear[(j, 0)] * self.pinned.0 + self.linear[(j, n)] * self.pinned.1;
        }
        self.add_source(t, out);
    }
}
