use std::fmt;

use num_traits::One;

use crate::arith::{int, Field, Rational};
use crate::error::{Error, Result};

/// Absolute precision used for series that are exact polynomials.
pub const EXACT: i64 = i64::MAX / 8;

/// A truncated Laurent series `Σ_{e ≥ val} c_e x^e + O(x^prec)`.
///
/// Coefficients are stored for exponents `val .. val + coeffs.len()`;
/// exponents in `val + coeffs.len() .. prec` are known to be zero.
/// Arithmetic propagates precision, so a coefficient can never be read
/// beyond what the operands determine.
#[derive(Clone, PartialEq)]
pub struct Series<F: Field> {
    ctx: F::Ctx,
    val: i64,
    coeffs: Vec<F>,
    prec: i64,
}

impl<F: Field> Series<F> {
    /// Series with coefficients starting at `val`, known up to `O(x^prec)`.
    pub fn new(ctx: &F::Ctx, val: i64, mut coeffs: Vec<F>, prec: i64) -> Self {
        let keep = (prec - val).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = Series { ctx: ctx.clone(), val, coeffs, prec };
        s.trim();
        s
    }

    /// A power series `Σ c_k x^k + O(x^prec)`.
    pub fn from_coeffs(ctx: &F::Ctx, coeffs: Vec<F>, prec: i64) -> Self {
        Self::new(ctx, 0, coeffs, prec)
    }

    /// An exact polynomial.
    pub fn polynomial(ctx: &F::Ctx, coeffs: Vec<F>) -> Self {
        Self::new(ctx, 0, coeffs, EXACT)
    }

    pub fn zero(ctx: &F::Ctx, prec: i64) -> Self {
        Series { ctx: ctx.clone(), val: prec, coeffs: Vec::new(), prec }
    }

    pub fn constant(c: F) -> Self {
        let ctx = c.context();
        Self::new(&ctx, 0, vec![c], EXACT)
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Self::constant(F::one_of(ctx))
    }

    /// `c · x^e`, exact.
    pub fn monomial(c: F, e: i64) -> Self {
        let ctx = c.context();
        Self::new(&ctx, e, vec![c], EXACT)
    }

    /// The variable `x`, exact.
    pub fn var(ctx: &F::Ctx) -> Self {
        Self::monomial(F::one_of(ctx), 1)
    }

    fn trim(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.vanishes()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.vanishes()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.val = self.prec;
        }
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Absolute precision: coefficients are known for exponents `< prec`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT / 2
    }

    /// Valuation of the known part, `None` if every known coefficient is zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lowest exponent that may be nonzero.
    pub fn low(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.prec
        } else {
            self.val
        }
    }

    /// One past the highest stored exponent.
    pub fn high(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn try_coeff(&self, e: i64) -> Result<F> {
        if e >= self.prec {
            return Err(Error::PrecisionExhausted { requested: e, precision: self.prec });
        }
        Ok(self.coeff_unchecked(e))
    }

    /// Coefficient of `x^e`; panics if `e` is beyond the known precision.
    pub fn coeff(&self, e: i64) -> F {
        self.try_coeff(e).unwrap_or_else(|err| panic!("{err}"))
    }

    fn coeff_unchecked(&self, e: i64) -> F {
        if e < self.val {
            return F::zero_of(&self.ctx);
        }
        self.coeffs
            .get((e - self.val) as usize)
            .cloned()
            .unwrap_or_else(|| F::zero_of(&self.ctx))
    }

    /// Coefficient of `x^{-1}`.
    pub fn residue(&self) -> Result<F> {
        self.try_coeff(-1)
    }

    /// Drops everything from `x^prec` on.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(&self.ctx, self.val, self.coeffs.clone(), prec.min(self.prec))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.min(rhs.prec);
        let nonzero = [self, rhs].into_iter().filter(|s| !s.is_zero());
        let lo = nonzero.clone().map(|s| s.val).min().unwrap_or(prec).min(prec);
        let hi = nonzero.map(|s| s.high()).max().unwrap_or(prec).min(prec);
        let coeffs = (lo..hi.max(lo))
            .map(|e| self.coeff_unchecked(e).plus(&rhs.coeff_unchecked(e)))
            .collect();
        Self::new(&self.ctx, lo, coeffs, prec)
    }

    pub fn neg(&self) -> Self {
        Series {
            ctx: self.ctx.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(F::negated).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = sat_add(self.prec, rhs.low()).min(sat_add(rhs.prec, self.low()));
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ctx, prec);
        }
        let val = self.val + rhs.val;
        let len = ((prec - val).max(0) as usize).min(self.coeffs.len() + rhs.coeffs.len() - 1);
        let mut out = vec![F::zero_of(&self.ctx); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.vanishes() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        Self::new(&self.ctx, val, out, prec)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.vanishes() {
            return Self::zero(&self.ctx, self.prec);
        }
        Series {
            ctx: self.ctx.clone(),
            val: self.val,
            coeffs: self.coeffs.iter().map(|a| a.times(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&F::from_rational(&self.ctx, q))
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        let prec = sat_add(self.prec, k);
        let val = if self.coeffs.is_empty() { prec } else { self.val + k };
        Series { ctx: self.ctx.clone(), val, coeffs: self.coeffs.clone(), prec }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.ctx), |acc, _| acc.mul(self))
    }

    /// Multiplicative inverse; errors if no coefficient is known to be nonzero.
    pub fn inv(&self) -> Result<Self> {
        let lead = self.coeffs.first().ok_or(Error::DivisionByZero)?;
        let lead_inv = lead.inverse().ok_or(Error::DivisionByZero)?;
        let rel = if self.is_exact() { None } else { Some((self.prec - self.val) as usize) };
        let n = rel.unwrap_or(self.coeffs.len());
        let out_len = rel.unwrap_or(n.max(1));
        let mut out: Vec<F> = Vec::with_capacity(out_len);
        out.push(lead_inv.clone());
        for k in 1..out_len {
            let mut acc = F::zero_of(&self.ctx);
            for j in 1..=k.min(self.coeffs.len() - 1) {
                acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
            }
            out.push(acc.times(&lead_inv).negated());
        }
        match rel {
            Some(r) => Ok(Self::new(&self.ctx, -self.val, out, -self.val + r as i64)),
            None if self.coeffs.len() == 1 => Ok(Self::new(&self.ctx, -self.val, out, EXACT)),
            None => Err(Error::Invalid(
                "inverse of an exact non-monomial needs an explicit truncation".into(),
            )),
        }
    }

    /// Inverse of an exact polynomial, truncated to `O(x^prec)`.
    pub fn inv_to(&self, prec: i64) -> Result<Self> {
        let lead = self.coeffs.first().ok_or(Error::DivisionByZero)?;
        if lead.vanishes() {
            return Err(Error::DivisionByZero);
        }
        // Relative precision needed so that the inverse reaches `prec`.
        let rel = (prec + self.val).max(1);
        self.truncate(self.val + rel).inv()
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.scaled(&int(self.val + k as i64)))
            .collect();
        Self::new(&self.ctx, self.val - 1, coeffs, sat_add(self.prec, -1))
    }

    /// The series `f(-x)`.
    pub fn reflect(&self) -> Self {
        Series {
            ctx: self.ctx.clone(),
            val: self.val,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if (self.val + k as i64) % 2 == 0 { c.clone() } else { c.negated() })
                .collect(),
            prec: self.prec,
        }
    }

    /// `f(x^k)` for `k ≥ 1`.
    pub fn substitute_power(&self, k: u32) -> Self {
        let k64 = k as i64;
        let mut coeffs = vec![F::zero_of(&self.ctx); (self.coeffs.len().max(1) - 1) * k as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k as usize] = c.clone();
        }
        Self::new(&self.ctx, self.val * k64, coeffs, sat_mul(self.prec, k64))
    }

    /// Composition `self(inner)`; `self` must be a power series and `inner`
    /// must have positive valuation.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.low() < 0 {
            return Err(Error::Invalid("outer series has a pole".into()));
        }
        let v = inner.low();
        if v < 1 {
            return Err(Error::Valuation);
        }
        // Horner on the stored coefficients; the outer truncation contributes O(inner^prec).
        let tail_prec = sat_mul(self.prec, v);
        let mut acc = Self::zero(&self.ctx, EXACT);
        for e in (0..self.high()).rev() {
            acc = acc.mul(inner).add(&Self::constant(self.coeff_unchecked(e)));
        }
        Ok(acc.truncate(tail_prec))
    }

    /// Compositional inverse of a series `a_1 x + a_2 x² + …` with `a_1 ≠ 0`.
    pub fn reversion(&self) -> Result<Self> {
        if self.low() != 1 {
            return Err(Error::Valuation);
        }
        // x = y · φ(x) with φ(x) = x / f(x); then [y^k] x = (1/k) [x^{k-1}] φ^k.
        let phi = self.shift(-1).inv()?;
        lagrange_invert_with(&phi, (self.prec - 1) as usize)
    }

    /// `exp(f)` for `f` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if self.low() < 1 {
            return Err(Error::Valuation);
        }
        let n = self.prec.min(EXACT) as usize;
        let n = if self.is_exact() { return Err(Error::Invalid("exp of an exact series needs a truncation".into())) } else { n };
        let mut out = vec![F::one_of(&self.ctx)];
        for k in 1..n {
            let mut acc = F::zero_of(&self.ctx);
            for j in 1..=k {
                let gj = self.coeff_unchecked(j as i64);
                if !gj.vanishes() {
                    acc = acc.plus(&gj.times(&out[k - j]).scaled(&int(j as i64)));
                }
            }
            out.push(acc.scaled(&Rational::new(1.into(), (k as i64).into())));
        }
        Ok(Self::from_coeffs(&self.ctx, out, n as i64))
    }

    /// `log(f)` for `f` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.low() < 0 || !self.coeff_unchecked(0).equals_one() {
            return Err(Error::Invalid("log needs constant term 1".into()));
        }
        let d = self.derivative().div(self)?;
        Ok(d.integral())
    }

    /// Antiderivative with zero constant term; requires no `x^{-1}` term.
    pub fn integral(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let e = self.val + k as i64 + 1;
                assert!(e != 0 || c.vanishes(), "integral of x^-1");
                if e == 0 {
                    c.clone()
                } else {
                    c.scaled(&Rational::new(1.into(), e.into()))
                }
            })
            .collect();
        Self::new(&self.ctx, self.val + 1, coeffs, sat_add(self.prec, 1))
    }

    /// `f^q` for rational `q` and `f` with constant term 1.
    pub fn pow_rational(&self, q: &Rational) -> Result<Self> {
        self.log()?.scale_rational(q).exp()
    }

    /// Applies a map to every coefficient (e.g. a change of field).
    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Series<G> {
        Series::new(ctx, self.val, self.coeffs.iter().map(f).collect(), self.prec)
    }

    /// Stored coefficients with their exponents.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.coeffs.iter().enumerate().map(move |(k, c)| (self.val + k as i64, c))
    }
}

impl Series<Rational> {
    /// `Σ_{k<n} c_k x^k + O(x^n)` from rational coefficients.
    pub fn rational(coeffs: Vec<Rational>, prec: i64) -> Self {
        Self::from_coeffs(&(), coeffs, prec)
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT / 2 {
        EXACT
    } else {
        a + b
    }
}

fn sat_mul(a: i64, b: i64) -> i64 {
    if a >= EXACT / 2 {
        EXACT
    } else {
        a * b
    }
}

impl<F: Field> fmt::Debug for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Series<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms()
            .filter(|(_, c)| !c.vanishes())
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{e}"),
            })
            .collect();
        if !self.is_exact() {
            parts.push(format!("O(x^{})", self.prec));
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Lagrange inversion: the solution `z(q) = Σ_{k≥1} c_k q^k` of `z = q·φ(z)`,
/// `c_k = (1/k)[z^{k-1}] φ(z)^k`, to `O(q^{order+1})`.
pub fn lagrange_invert_with<F: Field>(phi: &Series<F>, order: usize) -> Result<Series<F>> {
    if phi.low() < 0 || phi.coeff_unchecked(0).vanishes() {
        return Err(Error::Invalid("Lagrange inversion needs φ(0) ≠ 0".into()));
    }
    let ctx = phi.ctx().clone();
    let phi = phi.truncate(order as i64);
    let mut coeffs = vec![F::zero_of(&ctx)];
    let mut power = Series::one(&ctx);
    for k in 1..=order {
        power = power.mul(&phi);
        let c = power.try_coeff(k as i64 - 1)?;
        coeffs.push(c.scaled(&Rational::new(1.into(), (k as i64).into())));
    }
    Ok(Series::from_coeffs(&ctx, coeffs, order as i64 + 1))
}

/// Inverts `q = z·e^{-z^r}`: returns `z(q)` to `O(q^{order+1})`.
pub fn lagrange_invert(r: u32, order: usize) -> Result<Series<Rational>> {
    if order < 1 || r < 1 {
        return Err(Error::Invalid("lagrange_invert needs r ≥ 1 and order ≥ 1".into()));
    }
    // φ(z) = e^{z^r}
    let phi = Series::monomial(Rational::one(), r as i64).truncate(order as i64 + 1).exp()?;
    lagrange_invert_with(&phi, order)
}
