//! Exact linear algebra over prime fields.

pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::Field;
pub use matrix::{are_independent, dual_family, solve_linear, DualFamily, Matrix, Rref, Vector};
pub use subspace::{enumerate_subspaces, gaussian_binomial, ordered_basis_count, Subspace};
pub(crate) use subspace::combinations as combinations_of;
