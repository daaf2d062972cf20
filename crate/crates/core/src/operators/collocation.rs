use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::problems::{map_to_reference, PDEProblem};
use crate::scalar::Real;
use crate::spectral::{diff_matrix, GaussLobattoGrid, PolynomialFamily};

use super::NodalSystem;

/// Chebyshev collocation operators on a Gauss–Lobatto grid.
#[derive(Debug, Clone)]
pub struct CollocationOperators<T> {
    pub d: Matrix<T>,
    pub d2: Matrix<T>,
    /// Boundary projector: identity with the first and last diagonal entries zeroed.
    pub z: Matrix<T>,
}

impl<T: Real> CollocationOperators<T> {
    pub fn new(grid: &GaussLobattoGrid<T>) -> Result<Self> {
        if grid.family() != PolynomialFamily::Chebyshev {
            return Err(Error::WrongFamily {
                expected: "Chebyshev",
            });
        }
        let d = diff_matrix(grid);
        let d2 = d.matmul(&d);
        let n = grid.len();
        let mut z = Matrix::identity(n);
        z[(0, 0)] = T::zero();
        z[(n - 1, n - 1)] = T::zero();
        Ok(Self { d, d2, z })
    }
}

/// Collocation semidiscretization at the interior Chebyshev nodes:
///
/// ```text
/// (I - a D²) dV/dt + α D V + β D² V + γ D f(V) = F
/// ```
///
/// The problem is mapped onto `(-1, 1)`; Dirichlet values are pinned on the
/// boundary entries of the nodal vector.
pub fn assemble_collocation<T: Real>(
    grid: Arc<GaussLobattoGrid<T>>,
    problem: &PDEProblem<T>,
) -> Result<NodalSystem<T>> {
    let ops = CollocationOperators::new(&grid)?;
    let p = map_to_reference(problem)?;
    let n = grid.degree();
    let int: Vec<usize> = grid.interior().collect();
    let all: Vec<usize> = (0..=n).collect();
    let mass = Matrix::identity(n + 1)
        .add_scaled(-p.a, &ops.d2)
        .select(&int, &int);
    let linear = ops
        .d
        .scale(-p.alpha)
        .add_scaled(-p.beta, &ops.d2)
        .select(&int, &all);
    let flux_op = match (&p.flux, p.gamma != T::zero()) {
        (Some(f), true) => Some((ops.d.scale(-p.gamma).select(&int, &all), f.clone())),
        _ => None,
    };
    let x = grid.nodes();
    Ok(NodalSystem {
        mass,
        linear,
        flux_op,
        source: p.source.clone(),
        source_weights: vec![T::one(); n - 1],
        pinned: p.boundary,
        offset: vec![T::zero(); n + 1],
        initial: int.iter().map(|&j| (p.initial)(x[j])).collect(),
        grid,
    })
}
