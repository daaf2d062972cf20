//! Orthogonal polynomials, Gauss–Lobatto grids, discrete inner products,
//! interpolation, differentiation matrices and Chebyshev transforms.

mod grid;
mod interp;
mod poly;
mod transform;

pub use grid::{
    chebyshev_gl_grid, discrete_inner_product, legendre_gl_grid, GaussLobattoGrid, NodalField,
    SpectralCoefficients,
};
pub use interp::{
    barycentric_weights, diff_matrix, interpolant_eval, nodal_basis_eval, second_diff_matrix,
};
pub use poly::{eval_orthopoly, eval_orthopoly_derivative, legendre_with_derivatives};
pub use transform::{
    cheb_coeffs_to_nodal, cheb_coeffs_to_nodal_dense, cheb_nodal_to_coeffs,
    cheb_nodal_to_coeffs_dense, chebyshev_transform_matrix,
};

/// Orthogonal polynomial family with its Gauss–Lobatto weight function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolynomialFamily {
    /// `w(x) = 1`
    Legendre,
    /// `w(x) = (1 - x^2)^(-1/2)`
    Chebyshev,
}

impl PolynomialFamily {
    pub fn name(self) -> &'static str {
        match self {
            Self::Legendre => "Legendre",
            Self::Chebyshev => "Chebyshev",
        }
    }
}
