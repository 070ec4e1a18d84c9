//! Exact arithmetic: rationals, cyclotomic fields and Bernoulli polynomials.

mod bernoulli;
mod combinat;
mod cyclotomic;
mod field;
mod rational;

pub use combinat::{double_factorial, set_partitions};
pub use bernoulli::{bernoulli_number, bernoulli_polynomial};
pub use cyclotomic::{cyclotomic_arithmetic, rational_part, CycloOp, Cyclotomic, CyclotomicField};
pub use field::Field;
pub use rational::{binomial, factorial, int, parse_rational, rat, Rational};
