//! Quadratic-character L-values, representation counts by `x² + 4y²`, and
//! the Dirichlet series and contour integrals assembled from them.

pub mod arith;
pub mod coeffs;
pub mod counting;
pub mod error;
pub mod oracles;
pub mod quadfields;
pub mod series;
pub mod special;

pub use error::{Error, Result};
