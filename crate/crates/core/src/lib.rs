//! Exact classification of length-two extensions of tensor modules over the Witt algebra.

mod expr;
pub mod polynomials;
pub mod scalars;

pub use polynomials::{MPoly, UPoly, Var};
pub use scalars::{Rat, Scalar, ScalarError};
pub mod homspace;
pub mod linalg;
pub mod cocycles;
pub mod tables;
pub mod solver;
pub mod extensions;
