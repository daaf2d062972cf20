//! Spectral solvers for one-dimensional pseudo-parabolic (Sobolev) equations
//!
//! ```text
//! v_t - a v_xxt + α v_x + β v_xx + γ ∂_x f(v) = F(x, t)
//! ```
//!
//! with Dirichlet data, discretized by Legendre Galerkin (nodal G-NI and the
//! compact Shen basis) or Chebyshev collocation in space and two-stage
//! SDIRK-SSP schemes in time.
//!
//! Every routine is generic over the scalar type through [`Real`]; the `*64`
//! aliases below fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod norms;
pub mod operators;
pub mod problems;
pub mod reference;
pub mod scalar;
pub mod spectral;
pub mod time;

pub use error::{Error, Result};
pub use scalar::Real;
pub use spectral::PolynomialFamily;

pub type GridF64 = spectral::GaussLobattoGrid<f64>;
pub type NodalFieldF64 = spectral::NodalField<f64>;
pub type MatrixF64 = linalg::Matrix<f64>;
pub type ErrorReportF64 = norms::ErrorReport<f64>;
pub type SineSeriesF64 = reference::SineSeriesSolution<f64>;
