use std::fmt;

use super::Rational;

/// A commutative field whose elements may carry a runtime context
/// (for instance the order of a cyclotomic field).
///
/// Method names avoid clashing with the `std::ops` traits that some
/// implementors also provide.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn context(&self) -> Self::Ctx;
    fn zero_of(ctx: &Self::Ctx) -> Self;
    fn one_of(ctx: &Self::Ctx) -> Self;
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Self;
    fn vanishes(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn scaled(&self, q: &Rational) -> Self {
        self.times(&Self::from_rational(&self.context(), q))
    }

    fn equals_one(&self) -> bool {
        *self == Self::one_of(&self.context())
    }

    fn power(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one_of(&self.context());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.times(&base);
            }
            base = base.times(&base);
            e >>= 1;
        }
        acc
    }
}

impl Field for Rational {
    type Ctx = ();

    fn context(&self) {}
    fn zero_of(_: &()) -> Self {
        num_traits::Zero::zero()
    }
    fn one_of(_: &()) -> Self {
        num_traits::One::one()
    }
    fn from_rational(_: &(), q: &Rational) -> Self {
        q.clone()
    }
    fn vanishes(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        if Field::vanishes(self) {
            None
        } else {
            Some(num_traits::Inv::inv(self))
        }
    }
    fn scaled(&self, q: &Rational) -> Self {
        self * q
    }
}
