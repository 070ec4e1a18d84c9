use std::fmt;

use crate::arith::{Field, Rational};

/// Dense univariate polynomial, coefficients from degree 0 upward, with no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    ctx: F::Ctx,
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(ctx: &F::Ctx, mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.vanishes()) {
            coeffs.pop();
        }
        Poly { ctx: ctx.clone(), coeffs }
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.context();
        Self::new(&ctx, vec![c])
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one_of(ctx))
    }

    /// The polynomial `x`.
    pub fn x(ctx: &F::Ctx) -> Self {
        Self::new(ctx, vec![F::zero_of(ctx), F::one_of(ctx)])
    }

    /// `x - p`.
    pub fn linear_root(p: &F) -> Self {
        let ctx = p.context();
        Self::new(&ctx, vec![p.negated(), F::one_of(&ctx)])
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(|| F::zero_of(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).plus(&rhs.coeff(k))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n).map(|k| self.coeff(k).minus(&rhs.coeff(k))).collect();
        Self::new(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Poly { ctx: self.ctx.clone(), coeffs: self.coeffs.iter().map(F::negated).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut c = vec![F::zero_of(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.vanishes() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].plus(&a.times(b));
            }
        }
        Self::new(&self.ctx, c)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        Self::new(&self.ctx, self.coeffs.iter().map(|a| a.scaled(q)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ctx), |acc, _| acc.mul(self))
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, rhs: &Self) -> Option<(Self, Self)> {
        let lead_inv = rhs.leading()?.inverse()?;
        let dr = rhs.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dr {
            return Some((Self::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![F::zero_of(&self.ctx); rem.len() - dr];
        for k in (dr..rem.len()).rev() {
            let q = rem[k].times(&lead_inv);
            if q.vanishes() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = k - dr + j;
                rem[idx] = rem[idx].minus(&q.times(b));
            }
            quot[k - dr] = q;
        }
        rem.truncate(dr);
        Some((Self::new(&self.ctx, quot), Self::new(&self.ctx, rem)))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(F::inverse) {
            Some(inv) => self.scale(&inv),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·rhs = g`, `g` monic.
    pub fn ext_gcd(&self, rhs: &Self) -> (Self, Self, Self) {
        let ctx = &self.ctx;
        let (mut r0, mut r1) = (self.clone(), rhs.clone());
        let (mut s0, mut s1) = (Self::one(ctx), Self::zero(ctx));
        let (mut t0, mut t1) = (Self::zero(ctx), Self::one(ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(F::inverse) {
            Some(inv) => (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)),
            None => (r0, s0, t0),
        }
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero_of(&self.ctx), |acc, c| acc.times(x).plus(c))
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a.scaled(&crate::arith::int(k as i64)))
            .collect();
        Self::new(&self.ctx, c)
    }

    /// The polynomial `p(x + a)`.
    pub fn shift(&self, a: &F) -> Self {
        let lin = Self::new(&self.ctx, vec![a.clone(), F::one_of(&self.ctx)]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(&self.ctx), |acc, c| acc.mul(&lin).add(&Self::constant(c.clone())))
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{k}")?,
            }
        }
        Ok(())
    }
}
