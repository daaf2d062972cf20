//! Assembly of the semidiscrete systems: nodal Legendre G-NI, Chebyshev
//! collocation, and the compact Shen basis.

mod collocation;
mod gni;
mod nodal;
mod shen;

pub use collocation::{assemble_collocation, CollocationOperators};
pub use gni::{
    assemble_gni_bbm, assemble_gni_general, gnil_system, GniGeneralSystem, GniOperators,
};
pub use nodal::NodalSystem;
pub use shen::{
    bn_eigenvalues, legendre_nodal_to_shen, shen_matrices, shen_reconstruct, shen_to_nodal,
    ParitySolver, ShenLinearSystem, ShenSystem,
};
