use std::fmt;

use crate::arith::{Field, Rational};
use crate::error::{Error, Result};
use crate::series::{Poly, Series};

/// A quotient `num / den` of polynomials in lowest terms with monic `den`.
///
/// Implements [`Field`], so rational functions over rational functions give
/// multivariate towers.
#[derive(Clone, PartialEq)]
pub struct RationalFunction<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RationalFunction<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let ctx = den.ctx().clone();
            return Ok(Self::from_poly(Poly::zero(&ctx)));
        }
        let g = num.gcd(&den);
        let (mut num, _) = num.div_rem(&g).expect("gcd is nonzero");
        let (mut den, _) = den.div_rem(&g).expect("gcd is nonzero");
        let lead = den.leading().cloned().expect("nonzero denominator");
        if !lead.equals_one() {
            let inv = lead.inverse().ok_or(Error::DivisionByZero)?;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let ctx = p.ctx().clone();
        RationalFunction { num: p, den: Poly::one(&ctx) }
    }

    /// `1 / (x - a)^k`.
    pub fn pole(a: &F, k: u32) -> Self {
        let ctx = a.context();
        RationalFunction { num: Poly::one(&ctx), den: Poly::linear_root(a).pow(k) }
    }

    pub fn numerator(&self) -> &Poly<F> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<F> {
        &self.den
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap_or(0) as i64)
    }

    pub fn eval(&self, x: &F) -> Result<F> {
        let d = self.den.eval(x);
        let inv = d.inverse().ok_or(Error::PoleAtExpansionPoint)?;
        Ok(self.num.eval(x).times(&inv))
    }

    pub fn derivative(&self) -> Self {
        let top = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        Self::new(top, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Laurent expansion in `t = x - a` to `O(t^prec)`.
    pub fn laurent_at(&self, a: &F, prec: i64) -> Result<Series<F>> {
        let ctx = self.num.ctx().clone();
        let num = self.num.shift(a);
        let den = self.den.shift(a);
        let v = den.coeffs().iter().take_while(|c| c.vanishes()).count() as i64;
        let num_s = Series::polynomial(&ctx, num.coeffs().to_vec());
        let den_s = Series::polynomial(&ctx, den.coeffs().to_vec());
        // num/den = t^{-v} · num / (den / t^v); the unit part needs relative precision prec + v.
        let unit = den_s.shift(-v).truncate((prec + v).max(1));
        Ok(num_s.truncate((prec + v).max(1)).mul(&unit.inv()?).shift(-v).truncate(prec))
    }

    /// Composition with a power series `x = s(t)` (no pole of `self` at `s(0)`).
    pub fn compose_series(&self, s: &Series<F>) -> Result<Series<F>> {
        let ctx = self.num.ctx().clone();
        let poly_at = |p: &Poly<F>| {
            let mut acc = Series::zero(&ctx, crate::series::EXACT);
            for c in p.coeffs().iter().rev() {
                acc = acc.mul(s).add(&Series::constant(c.clone()));
            }
            acc
        };
        let d = poly_at(&self.den);
        if d.low() > 0 || d.try_coeff(0)?.vanishes() {
            return Err(Error::PoleAtExpansionPoint);
        }
        poly_at(&self.num).div(&d.truncate(s.precision()))
    }

    /// Maps coefficients through a field homomorphism.
    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Result<RationalFunction<G>> {
        let conv = |p: &Poly<F>| Poly::new(ctx, p.coeffs().iter().map(&f).collect());
        RationalFunction::new(conv(&self.num), conv(&self.den))
    }
}

/// Residue of `f(x) dx` at `x = a`.
pub fn residue_at<F: Field>(f: &RationalFunction<F>, a: &F) -> Result<F> {
    f.laurent_at(a, 0)?.residue()
}

impl<F: Field> Field for RationalFunction<F> {
    type Ctx = F::Ctx;

    fn context(&self) -> F::Ctx {
        self.num.ctx().clone()
    }

    fn zero_of(ctx: &F::Ctx) -> Self {
        Self::from_poly(Poly::zero(ctx))
    }

    fn one_of(ctx: &F::Ctx) -> Self {
        Self::from_poly(Poly::one(ctx))
    }

    fn from_rational(ctx: &F::Ctx, q: &Rational) -> Self {
        Self::from_poly(Poly::constant(F::from_rational(ctx, q)))
    }

    fn vanishes(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone()).expect("monic");
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::new(num, self.den.mul(&rhs.den)).expect("monic")
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    fn times(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("monic")
    }

    fn negated(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    fn inverse(&self) -> Option<Self> {
        if self.vanishes() {
            return None;
        }
        Self::new(self.den.clone(), self.num.clone()).ok()
    }
}

impl<F: Field> fmt::Display for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for RationalFunction<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Cyclotomic, CyclotomicField};

    type Q = Rational;

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::new(&(), c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn normalises_to_lowest_terms() {
        // (x^2 - 1) / (2x - 2) = (x + 1)/2
        let f = RationalFunction::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert_eq!(f.denominator(), &p(&[1]));
        assert_eq!(f.numerator(), &Poly::new(&(), vec![rat(1, 2), rat(1, 2)]));
        assert!(RationalFunction::new(p(&[1]), p(&[])).is_err());
    }

    #[test]
    fn residues() {
        // 1/((x-1)(x-2)) has residue -1 at 1 and 1 at 2
        let f = RationalFunction::new(p(&[1]), p(&[2, -3, 1])).unwrap();
        assert_eq!(residue_at(&f, &int(1)).unwrap(), int(-1));
        assert_eq!(residue_at(&f, &int(2)).unwrap(), int(1));
        assert_eq!(residue_at(&f, &int(0)).unwrap(), int(0));
        // x^2/(x-1)^3 has residue 1 at 1
        let g = RationalFunction::new(p(&[0, 0, 1]), p(&[-1, 3, -3, 1])).unwrap();
        assert_eq!(residue_at(&g, &int(1)).unwrap(), int(1));
        assert_eq!(residue_at(&g.derivative(), &int(1)).unwrap(), int(0));
    }

    #[test]
    fn cyclotomic_residues_sum_to_zero() {
        // 1/(x^3 - 1) has residues ζ^i/3 at the cube roots of unity
        let k = CyclotomicField::new(3);
        let num = Poly::one(&k);
        let c = |x: i64| Cyclotomic::from_rational_in(&k, int(x));
        let den = Poly::new(&k, vec![c(-1), c(0), c(0), c(1)]);
        let f = RationalFunction::new(num, den).unwrap();
        let mut total = Cyclotomic::zero_of(&k);
        for i in 0..3 {
            let z = Cyclotomic::zeta_pow(&k, i);
            let res = residue_at(&f, &z).unwrap();
            assert_eq!(res, z.scaled(&rat(1, 3)));
            total = total.plus(&res);
        }
        assert!(total.vanishes());
    }

    #[test]
    fn nested_tower() {
        // Q(y)(x): 1/(x - y) + 1/(x + y) = 2x / (x^2 - y^2)
        type R = RationalFunction<Q>;
        let y = R::from_poly(p(&[0, 1]));
        let a = RationalFunction::<R>::pole(&y, 1);
        let b = RationalFunction::<R>::pole(&y.negated(), 1);
        let sum = a.plus(&b);
        let two = R::from_rational(&(), &int(2));
        assert_eq!(sum.numerator(), &Poly::new(&(), vec![R::zero_of(&()), two]));
        assert_eq!(sum.degree(), Some(-1));
        assert_eq!(residue_at(&sum, &y).unwrap(), R::one_of(&()));
    }

    #[test]
    fn series_composition() {
        // 1/(1 - x) at x = t + t^2
        let f = RationalFunction::new(p(&[1]), p(&[1, -1])).unwrap();
        let s = Series::rational(vec![int(0), int(1), int(1)], 5);
        let c = f.compose_series(&s).unwrap();
        assert_eq!(c, Series::rational(vec![int(1), int(1), int(2), int(3), int(5)], 5));
        let at_one = Series::rational(vec![int(1), int(1)], 4);
        assert_eq!(f.compose_series(&at_one), Err(Error::PoleAtExpansionPoint));
    }
}
