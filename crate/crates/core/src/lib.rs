//! Exact computation of Chiodo-class intersection numbers, topological
//! recursion on the curve family `x = -z^r + log z`, `y = z^s`, and
//! r-orbifold Hurwitz numbers.
//!
//! Every number produced by this crate is an exact rational (or an element
//! of a cyclotomic field on the way there). The crate is organised bottom-up:
//!
//! - [`arith`]: rationals, the cyclotomic fields `Q(ζ_r)`, Bernoulli polynomials.
//! - [`series`]: truncated Laurent series, polynomials, rational functions.
//! - [`moduli`]: ψ/κ intersection numbers on the moduli space of curves.
//! - [`cohft`]: stable graphs and the Givental graph sum for Chiodo classes.
//! - [`recursion`]: the topological recursion and its expansion coefficients.
//! - [`hurwitz`]: character-theoretic and enumerative orbifold Hurwitz numbers.
//! - [`harness`]: closed formulas and the cross-check reports tying it together.

pub mod arith;
pub mod cohft;
pub mod error;
pub mod harness;
pub mod hurwitz;
pub mod moduli;
pub mod recursion;
pub mod series;

pub use arith::{bernoulli_polynomial, parse_rational, Cyclotomic, CyclotomicField, Field, Rational};
pub use cohft::{
    chiodo_elsv_integral, chiodo_integral, enumerate_stable_graphs, ChiodoSpec, GiventalData,
    StableGraph, UnitMode,
};
pub use error::{Error, Result};
pub use harness::{closed_form_rhs, cross_check, jpt_rhs, rescaling_check, CrossCheckReport, Grid};
pub use hurwitz::{enumerate_oracle, orbifold_hurwitz, HurwitzQuery, Partition};
pub use moduli::{kappa_psi_integral, witten_correlator, IntersectionCache, PsiKappaQuery};
pub use recursion::{series_identity_check, Correlator, IdentityKind, SpectralCurveConfig, SpectralRecursion};
pub use series::{Poly, RationalFunction, Series};
