//! Truncated Laurent series, polynomials and rational functions over any
//! [`Field`](crate::arith::Field), with composition, reversion, Lagrange
//! inversion and exact residues.

mod poly;
mod ratfunc;
#[allow(clippy::module_inception)]
mod series;

pub use poly::Poly;
pub use ratfunc::{residue_at, RationalFunction};
pub use series::{lagrange_invert, lagrange_invert_with, Series, EXACT};
