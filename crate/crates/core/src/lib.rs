//! Exact computations for twisted equivariant de Rham models.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod models;
pub mod poly;
pub mod verifier;

pub use algebra::*;
pub use error::{Error, Result};
pub use lie::{make_lie_algebra, make_lie_algebra_sparse, make_weil_algebra, LieAlgebraData, WeilAlgebra};
