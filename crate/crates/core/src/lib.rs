//! Exact computations for the Koszul calculus of N-homogeneous algebras.

pub mod bimodule;
pub mod duality;
pub mod error;
pub mod hochschild;
pub mod homology;
pub mod koszul;
pub mod linalg;
pub mod presentation;
pub mod presets;
pub mod products;

pub use error::{Error, Result};
