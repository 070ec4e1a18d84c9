use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::chart::{lift, local_chart, q_inverse};
use crate::arith::{bernoulli_polynomial, double_factorial, int, rat, rational_part, Cyclotomic, CyclotomicField, Field, Rational};
use crate::error::{Error, Result};
use crate::series::{RationalFunction, Series};

/// Which local identity to test. Branch indices run over `0..r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    /// Gaussian average of `dy` at branch `i` against the Bernoulli exponential.
    LaplaceY { s: u32, i: u32 },
    /// Gaussian average of `B(w_i, w_j)/dw_i |_{w_i = 0}` against the rows of `R^{-1}`.
    LaplaceB { i: u32, j: u32 },
    /// The dilaton-leaf condition at branch `i`: the `dy` average equals `R^{-1}` applied to the TFT vector.
    ConditionY { s: u32, i: u32 },
    /// The flat auxiliary function `ξ_a` against its closed expansion in `q̃ = e^{x̃}`.
    XiExpansion { a: u32 },
}

impl IdentityKind {
    pub fn parse(kind: &str, r: u32, args: &[u32]) -> Result<Self> {
        let need = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::Invalid(format!("{kind} takes {k} parameter(s), got {}", args.len())))
            }
        };
        let k = match kind {
            "laplace-y" => {
                need(1)?;
                IdentityKind::LaplaceY { s: args[0], i: 0 }
            }
            "laplace-B" | "laplace-b" => {
                need(2)?;
                IdentityKind::LaplaceB { i: args[0], j: args[1] }
            }
            "condition-y" => {
                need(1)?;
                IdentityKind::ConditionY { s: args[0], i: 0 }
            }
            "xi-expansion" => {
                need(1)?;
                IdentityKind::XiExpansion { a: args[0] }
            }
            other => return Err(Error::Invalid(format!("unsupported identity kind {other:?}"))),
        };
        k.validate(r)?;
        Ok(k)
    }

    fn validate(&self, r: u32) -> Result<()> {
        let ok = r >= 1
            && match *self {
                IdentityKind::LaplaceY { s, i } | IdentityKind::ConditionY { s, i } => s >= 1 && i < r,
                IdentityKind::LaplaceB { i, j } => i < r && j < r,
                IdentityKind::XiExpansion { a } => (1..=r).contains(&a),
            };
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{self:?} out of range for r = {r}")))
        }
    }
}

/// `exp(-Σ_{m≥1} B_{m+1}(q)/(m(m+1)) (-ζ)^m)` to `O(ζ^{order+1})`.
pub fn bernoulli_exponential(q: &Rational, order: usize) -> Series<Rational> {
    let prec = order as i64 + 1;
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (m, c) in coeffs.iter_mut().enumerate().skip(1) {
        let sign = if m % 2 == 0 { -1 } else { 1 };
        *c = bernoulli_polynomial(m as u32 + 1, q) * rat(sign, (m * (m + 1)) as i64);
    }
    Series::rational(coeffs, prec).exp().expect("no constant term")
}

/// `exp(Σ_m T_m (-ζ)^m) - 1` with `T_m = -(B_{m+1}(s/r) - B_{m+1}((s-r)/r))/(m(m+1))`,
/// the defect of the dilaton-leaf condition when `s > r`.
pub fn condition_y_defect(r: u32, s: u32, order: usize) -> Series<Rational> {
    let hi = bernoulli_exponential(&rat(s as i64, r as i64), order);
    let lo = bernoulli_exponential(&rat(s as i64 - r as i64, r as i64), order);
    hi.div(&lo).expect("unit constant term").sub(&Series::one(&())).truncate(order as i64 + 1)
}

/// Gaussian average: `w^{2k} ↦ (2k-1)!! ζ^k` with `(-3)!! = -1`, odd powers to 0.
pub fn wick<F: Field>(f: &Series<F>) -> Result<Series<F>> {
    if !f.is_zero() && f.low() < -2 {
        return Err(Error::Invalid(format!("Gaussian average of w^{}", f.low())));
    }
    let ctx = f.ctx().clone();
    let prec = (f.precision() + 1).div_euclid(2);
    let lo = if !f.is_zero() && f.low() < 0 { -1 } else { 0 };
    let mut coeffs = Vec::new();
    for k in lo..prec {
        let c = f.try_coeff(2 * k)?;
        let df: Rational = if k < 0 { int(-1) } else { Rational::from_integer(double_factorial(2 * k - 1)) };
        coeffs.push(c.scaled(&df));
    }
    Ok(Series::new(&ctx, lo, coeffs, prec))
}

fn w_order(order: usize) -> usize {
    2 * order + 6
}

/// `Wick[((1+t)^s)']` in the chart; equals the `dy` average up to `r^{-s/r} J^{is}`.
fn y_average(r: u32, s: u32, order: usize) -> Result<Series<Rational>> {
    let c = local_chart(r, 0, w_order(order))?;
    let one_t = Series::one(&()).add(&c.t);
    Ok(wick(&one_t.pow(s).derivative())?.truncate(order as i64 + 1))
}

/// Row `i` of `R^{-1}` in the branch basis, column `k`.
fn r_inverse_entry(f: &Arc<CyclotomicField>, r: u32, i: u32, k: u32, order: usize) -> Series<Cyclotomic> {
    let mut acc = Series::zero(f, order as i64 + 1);
    for c in 0..r {
        let phase = Cyclotomic::zeta_pow(f, c as i64 * (k as i64 - i as i64)).scaled(&rat(1, r as i64));
        let e = lift(f, &bernoulli_exponential(&rat(c as i64, r as i64), order));
        acc = acc.add(&e.scale(&phase));
    }
    acc
}

/// Returns the discrepancy of the chosen identity to `O(ζ^{order+1})` (or
/// `O(q̃^{order+1})` for `XiExpansion`); the zero series certifies it.
///
/// `ConditionY` with `s > r` returns `LHS/RHS - 1`, to be compared with
/// [`condition_y_defect`].
pub fn series_identity_check(kind: IdentityKind, r: u32, order: usize) -> Result<Series<Cyclotomic>> {
    if order < 1 {
        return Err(Error::Invalid("identity checks need order ≥ 1".into()));
    }
    kind.validate(r)?;
    let f = CyclotomicField::new(r as usize);
    let prec = order as i64 + 1;
    match kind {
        IdentityKind::LaplaceY { s, i: _ } => {
            // The phase J^{is} and r^{-s/r} are common to both sides.
            let lhs = y_average(r, s, order)?;
            let rhs = bernoulli_exponential(&rat(s as i64, r as i64), order).scale_rational(&rat(s as i64, r as i64));
            Ok(lift(&f, &lhs.sub(&rhs)))
        }
        IdentityKind::LaplaceB { i, j } => {
            // B/dw_i at w_i = 0 is (ζ^i/r) u_j'/(ζ^i - u_j)²; both sides times -ζ.
            let c = local_chart(r, j, w_order(order))?;
            let u = c.u_of_w();
            let zi = Cyclotomic::zeta_pow(&f, i as i64);
            let diff = Series::constant(zi.clone()).sub(&u);
            let lhs = u.derivative().div(&diff.mul(&diff))?.scale(&zi.scaled(&rat(1, r as i64)));
            let lhs = wick(&lhs)?.shift(1).neg().truncate(prec);
            Ok(lhs.sub(&r_inverse_entry(&f, r, i, j, order)))
        }
        IdentityKind::ConditionY { s, i } => {
            // 2C_i²C dy/dw_i = -(J^{is}/s) ((1+t)^s)' and 2C_k²C dy/dw_k(0) = -J^{ks}/r.
            let zs = |k: u32| Cyclotomic::zeta_pow(&f, k as i64 * s as i64);
            let lhs = lift(&f, &y_average(r, s, order)?).scale(&zs(i).scaled(&rat(-1, s as i64)));
            let mut rhs = Series::zero(&f, prec);
            for k in 0..r {
                let tft = zs(k).scaled(&rat(-1, r as i64));
                rhs = rhs.add(&r_inverse_entry(&f, r, k, i, order).scale(&tft));
            }
            if s <= r {
                Ok(lhs.sub(&rhs))
            } else {
                Ok(lhs.div(&rhs)?.sub(&Series::one(&f)).truncate(prec))
            }
        }
        IdentityKind::XiExpansion { a } => {
            let lhs = xi_flat(&f, r, a, order)?;
            let mut rhs = vec![Rational::zero(); order + 1];
            let mut p = 0u64;
            loop {
                let e = p * r as u64 + (r - a) as u64;
                if e > order as u64 {
                    break;
                }
                let num = Rational::from_integer(BigInt::from(e)).pow(p as i32);
                let den = Rational::from_integer(crate::arith::factorial(p)) * rat(r as i64, 1).pow(p as i32);
                rhs[e as usize] = num / den;
                p += 1;
            }
            Ok(lhs.truncate(prec).sub(&lift(&f, &Series::rational(rhs, prec))))
        }
    }
}

/// `Σ_i J^{-ai} ξ_i(u(q̃))` with `ξ_i = (1/r) J^i/(J^i - u)`.
fn xi_flat(f: &Arc<CyclotomicField>, r: u32, a: u32, order: usize) -> Result<Series<Cyclotomic>> {
    let u = lift(f, &q_inverse(r, order + 1)?);
    let mut acc = Series::zero(f, order as i64 + 1);
    for i in 0..r {
        let zi = Cyclotomic::zeta_pow(f, i as i64);
        let xi = Series::constant(zi.clone()).sub(&u).inv()?.scale(&zi.scaled(&rat(1, r as i64)));
        acc = acc.add(&xi.scale(&Cyclotomic::zeta_pow(f, -(a as i64 * i as i64))));
    }
    Ok(acc.truncate(order as i64 + 1))
}

/// `ξ_a` as a rational series in `q̃`.
pub fn xi_expansion(r: u32, a: u32, order: usize) -> Result<Series<Rational>> {
    IdentityKind::XiExpansion { a }.validate(r)?;
    let f = CyclotomicField::new(r as usize);
    let lhs = xi_flat(&f, r, a, order)?;
    let coeffs = (0..=order as i64).map(|k| rational_part(&lhs.coeff(k))).collect::<Result<Vec<_>>>()?;
    Ok(Series::rational(coeffs, order as i64 + 1))
}

/// `-(1/w) d/dw f(u(w)) - (1/r) (df/dx̃)(u(w))` in the chart at `ζ^i`, for a
/// rational `f` regular at the branch point.
pub fn operator_identity_check(r: u32, i: u32, f: &RationalFunction<Cyclotomic>, order: usize) -> Result<Series<Cyclotomic>> {
    let c = local_chart(r, i, order + 4)?;
    let u = c.u_of_w();
    let lhs = f.compose_series(&u)?.derivative().shift(-1).neg();
    // dx̃/du = (1 - u^r)/u vanishes at the branch point, so divide as Laurent series
    let field = CyclotomicField::new(r as usize);
    let x_prime = Series::one(&field).sub(&u.pow(r)).div(&u)?;
    let rhs = f
        .derivative()
        .compose_series(&u)?
        .div(&x_prime)?
        .scale(&Cyclotomic::from_rational_in(&field, rat(1, r as i64)));
    Ok(lhs.sub(&rhs).truncate(order as i64 + 1))
}
