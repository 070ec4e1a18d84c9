use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{bernoulli_polynomial, int, rat, Rational};
use crate::error::{Error, Result};
use crate::series::Series;

/// How the non-flat unit of the theory enters vertices of the graph sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum UnitMode {
    /// Each vertex carries `exp(Σ_m (-1)^m B_{m+1}(s/r)/(m(m+1)) κ_m)`.
    #[default]
    KappaDecoration,
    /// Each vertex carries extra dilaton leaves `T(ψ) = ψ(1 - R^{-1}_s(ψ))`
    /// in the unit direction; only defined for `0 ≤ s ≤ r`.
    DilatonLeaves,
}

/// The Chiodo theory of type `(r, s)` as Givental data: a TFT with metric
/// `η(v_a, v_b) = δ_{a+b≡0}/r`, a diagonal Bernoulli R-matrix and
/// κ-decorations, optionally with all cohomological degrees rescaled by `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct GiventalData {
    r: u32,
    s: u32,
    lambda: Rational,
}

/// `b` reduced into `1..=r`.
pub(crate) fn reduce(b: i64, r: u32) -> u32 {
    let m = b.rem_euclid(r as i64) as u32;
    if m == 0 {
        r
    } else {
        m
    }
}

/// Bivariate truncated series `Σ e_{jk} x^j y^k`, `j + k ≤ order`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSeries {
    order: usize,
    coeffs: Vec<Vec<Rational>>,
}

impl EdgeSeries {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, j: usize, k: usize) -> Rational {
        self.coeffs.get(j).and_then(|row| row.get(k)).cloned().unwrap_or_else(Rational::zero)
    }

    /// The series with the two variables exchanged.
    pub fn transposed(&self) -> Self {
        let coeffs = (0..=self.order)
            .map(|j| (0..=self.order - j).map(|k| self.coeff(k, j)).collect())
            .collect();
        EdgeSeries { order: self.order, coeffs }
    }
}

impl GiventalData {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be at least 1".into()));
        }
        Ok(GiventalData { r, s, lambda: Rational::one() })
    }

    /// The same data with every class of degree `k` multiplied by `λ^k`.
    pub fn scaled(&self, lambda: Rational) -> Self {
        GiventalData { lambda: &self.lambda * lambda, ..self.clone() }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    /// The index `a` with `v_a` the unit of the TFT.
    pub fn unit_index(&self) -> u32 {
        reduce(self.s as i64, self.r)
    }

    pub fn metric(&self, a: u32, b: u32) -> Rational {
        if (a + b) % self.r == 0 {
            rat(1, self.r as i64)
        } else {
            Rational::zero()
        }
    }

    /// `ω_{g,n}(v_{a_1} ⊗ ⋯ ⊗ v_{a_n})`.
    pub fn tft_value(&self, g: u32, a: &[u32]) -> Rational {
        let n = a.len() as i64;
        let total: i64 = a.iter().map(|&x| x as i64).sum();
        if (total - self.s as i64 * (2 * g as i64 - 2 + n)).rem_euclid(self.r as i64) != 0 {
            return Rational::zero();
        }
        let e = 2 * g as i32 - 1;
        Rational::from_integer(self.r.into()).pow(e)
    }

    /// `Σ_m c_m (-λζ)^m` with `c_m = sign · B_{m+1}(q)/(m(m+1))`, `m = 1..=order`.
    fn bernoulli_exponent(&self, q: &Rational, sign: i64, order: usize) -> Series<Rational> {
        let mut coeffs = vec![Rational::zero()];
        for m in 1..=order as u32 {
            let c = bernoulli_polynomial(m + 1, q) / int(m as i64 * (m as i64 + 1)) * int(sign);
            let pw = (-&self.lambda).pow(m as i32);
            coeffs.push(c * pw);
        }
        Series::rational(coeffs, order as i64 + 1)
    }

    /// The `a`-th diagonal entry of `R^{-1}(ζ)` to `O(ζ^{order+1})`.
    pub fn r_inverse(&self, a: u32, order: usize) -> Series<Rational> {
        let q = rat(a as i64, self.r as i64);
        self.bernoulli_exponent(&q, -1, order).exp().expect("no constant term")
    }

    /// The `a`-th diagonal entry of `R(ζ)` to `O(ζ^{order+1})`.
    pub fn r_matrix(&self, a: u32, order: usize) -> Series<Rational> {
        let q = rat(a as i64, self.r as i64);
        self.bernoulli_exponent(&q, 1, order).exp().expect("no constant term")
    }

    /// Edge weight for half-edge decorations `(b, r - b)`:
    /// `r (1 - R^{-1}_b(x) R^{-1}_{r-b}(y)) / (x + y)` to total degree `order`.
    pub fn edge_series(&self, b: u32, order: usize) -> EdgeSeries {
        let c = reduce(self.r as i64 - b as i64, self.r);
        let rb = self.r_inverse(b, order + 1);
        let rc = self.r_inverse(c, order + 1);
        let eta_inv = int(self.r as i64);
        let mut coeffs: Vec<Vec<Rational>> = (0..=order).map(|j| vec![Rational::zero(); order + 1 - j]).collect();
        // Homogeneous degree-(d+1) part of the numerator, divided by x + y.
        for d in 0..=order {
            let top = d + 1;
            let num: Vec<Rational> = (0..=top)
                .map(|j| -(rb.coeff(j as i64) * rc.coeff((top - j) as i64)) * &eta_inv)
                .collect();
            let mut q = vec![Rational::zero(); top];
            for j in 0..top {
                q[j] = if j == 0 { num[0].clone() } else { &num[j] - &q[j - 1] };
            }
            assert_eq!(num[top], q[top - 1], "numerator not divisible by x + y");
            for (j, v) in q.into_iter().enumerate() {
                coeffs[j][d - j] = v;
            }
        }
        EdgeSeries { order, coeffs }
    }

    /// `exp(Σ_m λ^m (-1)^m B_{m+1}(s/r)/(m(m+1)) X^m)`; its `X^m` coefficient
    /// multiplies `κ_m`-monomials through the exponential.
    pub fn vertex_decoration_series(&self, order: usize) -> Series<Rational> {
        self.kappa_exponent(order).exp().expect("no constant term")
    }

    /// The exponent `Σ_m p_m X^m` of [`vertex_decoration_series`](Self::vertex_decoration_series).
    pub fn kappa_exponent(&self, order: usize) -> Series<Rational> {
        let q = rat(self.s as i64, self.r as i64);
        self.bernoulli_exponent(&q, 1, order)
    }

    /// Dilaton-leaf weights `t_m` with `Σ t_m z^m = 1 - R^{-1}_{unit}(z)`.
    pub fn dilaton_leaf_series(&self, order: usize) -> Result<Series<Rational>> {
        if self.s > self.r {
            return Err(Error::Invalid(format!(
                "dilaton leaves need 0 ≤ s ≤ r, got s = {} > r = {}",
                self.s, self.r
            )));
        }
        Ok(Series::one(&()).sub(&self.r_inverse(self.unit_index(), order)))
    }
}

/// `ω_{g,n}(v_{a_1} ⊗ ⋯ ⊗ v_{a_n})` for the Chiodo theory of type `(r, s)`.
pub fn tft_value(r: u32, s: u32, g: u32, a: &[u32]) -> Result<Rational> {
    if a.iter().any(|&x| x == 0 || x > r) {
        return Err(Error::Invalid(format!("decorations must lie in 1..={r}")));
    }
    Ok(GiventalData::new(r, s)?.tft_value(g, a))
}

/// Diagonal entry `a` of `R^{-1}(ζ)`.
pub fn r_matrix_entry(r: u32, a: u32, order: usize) -> Result<Series<Rational>> {
    Ok(GiventalData::new(r, 0)?.r_inverse(a, order))
}

pub fn edge_series(r: u32, a: u32, order: usize) -> Result<EdgeSeries> {
    Ok(GiventalData::new(r, 0)?.edge_series(a, order))
}

pub fn vertex_decoration_series(r: u32, s: u32, order: usize) -> Result<Series<Rational>> {
    Ok(GiventalData::new(r, s)?.vertex_decoration_series(order))
}
