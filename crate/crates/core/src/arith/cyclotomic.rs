use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::{int, Field, Rational};
use crate::error::{Error, Result};
use crate::series::Poly;

/// The field `Q(ζ_r)` presented as `Q[x] / Φ_r(x)`.
#[derive(Debug)]
pub struct CyclotomicField {
    order: usize,
    /// Monic `Φ_r`, low degree first.
    modulus: Vec<Rational>,
    /// `x^k mod Φ_r` for `k < 2·φ(r)`.
    reductions: Vec<Vec<Rational>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for CyclotomicField {}

static FIELDS: Lazy<Mutex<HashMap<usize, Arc<CyclotomicField>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn cyclotomic_polynomial(r: usize) -> Poly<Rational> {
    let mut num = vec![Rational::zero(); r + 1];
    num[0] = int(-1);
    num[r] = int(1);
    let mut p = Poly::new(&(), num);
    for d in (1..r).filter(|d| r % d == 0) {
        let (q, rem) = p.div_rem(&cyclotomic_polynomial(d)).expect("monic divisor");
        debug_assert!(rem.is_zero());
        p = q;
    }
    p
}

impl CyclotomicField {
    /// The shared field of order `r ≥ 1`.
    pub fn new(r: usize) -> Arc<Self> {
        assert!(r >= 1, "cyclotomic order must be positive");
        let mut fields = FIELDS.lock().expect("field registry poisoned");
        fields
            .entry(r)
            .or_insert_with(|| {
                let modulus = cyclotomic_polynomial(r).coeffs().to_vec();
                let deg = modulus.len() - 1;
                let mut reductions: Vec<Vec<Rational>> = Vec::with_capacity(2 * deg);
                for k in 0..(2 * deg).max(1) {
                    let v = if k < deg {
                        let mut v = vec![Rational::zero(); deg];
                        v[k] = Rational::one();
                        v
                    } else {
                        // x^k = x · x^{k-1}; shift and fold the top coefficient.
                        let prev = &reductions[k - 1];
                        let top = prev[deg - 1].clone();
                        let mut v = vec![Rational::zero(); deg];
                        for j in (1..deg).rev() {
                            v[j] = prev[j - 1].clone();
                        }
                        for (j, m) in modulus.iter().take(deg).enumerate() {
                            v[j] -= &top * m;
                        }
                        v
                    };
                    reductions.push(v);
                }
                Arc::new(CyclotomicField { order: r, modulus, reductions })
            })
            .clone()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Euler φ(r), the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> Poly<Rational> {
        Poly::new(&(), self.modulus.clone())
    }
}

/// An element of `Q(ζ_r)`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl Cyclotomic {
    pub fn from_rational_in(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        let mut coeffs = vec![Rational::zero(); field.degree()];
        coeffs[0] = q;
        Cyclotomic { field: field.clone(), coeffs }
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let r = field.order as i64;
        let e = k.mod_floor(&r) as usize;
        let deg = field.degree();
        let mut coeffs = vec![Rational::zero(); deg];
        if e < deg {
            coeffs[e] = Rational::one();
        } else {
            // e < r ≤ 2·deg except for r = 1, 2 where deg = 1 covers e < 2.
            let red = field.reductions.get(e).cloned().unwrap_or_else(|| {
                let mut acc = Self::from_rational_in(field, Rational::one());
                let z = Self::zeta_pow(field, 1);
                for _ in 0..e {
                    acc = &acc * &z;
                }
                acc.coeffs
            });
            coeffs = red;
        }
        Cyclotomic { field: field.clone(), coeffs }
    }

    /// Builds an element from coefficients of `1, ζ, ζ², …` (any length).
    pub fn from_coeffs(field: &Arc<CyclotomicField>, c: &[Rational]) -> Self {
        let mut acc = Self::from_rational_in(field, Rational::zero());
        for (k, a) in c.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &Self::zeta_pow(field, k as i64).scaled(a);
            }
        }
        acc
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.field.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(Zero::is_zero)
    }

    /// The image under the automorphism `ζ ↦ ζ^t` (`t` coprime to `r`).
    pub fn galois(&self, t: i64) -> Self {
        let mut acc = Self::from_rational_in(&self.field, Rational::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = &acc + &Self::zeta_pow(&self.field, t * k as i64).scaled(a);
            }
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field.order != other.field.order {
            Err(Error::OrderMismatch(self.field.order, other.field.order))
        } else {
            Ok(())
        }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let deg = self.field.degree();
        let mut wide = vec![Rational::zero(); 2 * deg - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<Rational> = wide[..deg].to_vec();
        for (k, c) in wide.iter().enumerate().skip(deg) {
            if c.is_zero() {
                continue;
            }
            for (j, m) in self.field.reductions[k].iter().enumerate() {
                if !m.is_zero() {
                    out[j] += c * m;
                }
            }
        }
        Cyclotomic { field: self.field.clone(), coeffs: out }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.coeffs.iter().all(Zero::is_zero) {
            return Err(Error::DivisionByZero);
        }
        if self.is_rational() {
            return Ok(Self::from_rational_in(&self.field, self.coeffs[0].recip()));
        }
        let a = Poly::new(&(), self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&self.field.modulus());
        debug_assert_eq!(g.degree(), Some(0));
        let (_, s) = s.div_rem(&self.field.modulus()).expect("monic modulus");
        let mut coeffs = s.coeffs().to_vec();
        coeffs.resize(self.field.degree(), Rational::zero());
        Ok(Cyclotomic { field: self.field.clone(), coeffs })
    }
}

impl<'a> Add for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        assert_eq!(self.field.order, rhs.field.order, "cyclotomic order mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }
}

impl<'a> Sub for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        assert_eq!(self.field.order, rhs.field.order, "cyclotomic order mismatch");
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Cyclotomic { field: self.field.clone(), coeffs }
    }
}

impl<'a> Mul for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        assert_eq!(self.field.order, rhs.field.order, "cyclotomic order mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl Field for Cyclotomic {
    type Ctx = Arc<CyclotomicField>;

    fn context(&self) -> Self::Ctx {
        self.field.clone()
    }
    fn zero_of(ctx: &Self::Ctx) -> Self {
        Self::from_rational_in(ctx, Rational::zero())
    }
    fn one_of(ctx: &Self::Ctx) -> Self {
        Self::from_rational_in(ctx, Rational::one())
    }
    fn from_rational(ctx: &Self::Ctx, q: &Rational) -> Self {
        Self::from_rational_in(ctx, q.clone())
    }
    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
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
        self.checked_inv().ok()
    }
    fn scaled(&self, q: &Rational) -> Self {
        Cyclotomic { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * q).collect() }
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*ζ"),
                _ => format!("{c}*ζ^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})[{}]", self.field.order, self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycloOp {
    Add,
    Mul,
    Invert,
}

/// Field operations in `Q(ζ_r)` with operand validation.
pub fn cyclotomic_arithmetic(op: CycloOp, lhs: &Cyclotomic, rhs: Option<&Cyclotomic>) -> Result<Cyclotomic> {
    let need_rhs = || rhs.ok_or_else(|| Error::Invalid("binary operation needs two operands".into()));
    match op {
        CycloOp::Add => lhs.checked_add(need_rhs()?),
        CycloOp::Mul => lhs.checked_mul(need_rhs()?),
        CycloOp::Invert => lhs.checked_inv(),
    }
}

/// The value of `x` if it lies in `Q`, otherwise `NotRational`.
pub fn rational_part(x: &Cyclotomic) -> Result<Rational> {
    if x.is_rational() {
        Ok(x.coeffs[0].clone())
    } else {
        Err(Error::not_rational(x))
    }
}
