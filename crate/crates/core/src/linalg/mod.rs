//! Exact linear algebra over the rationals and prime fields.

pub mod echelon;
pub mod field;
pub mod matrix;
pub mod sparse;
pub mod subspace;

pub use field::{Field, PrimeField, Rationals};
pub use matrix::Matrix;
pub use sparse::SparseVec;
pub use subspace::Subspace;
