use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factorial, rat, Rational};
use crate::cohft::{elsv_decorations, geometric, ChiodoSpec, SumOptions, UnitMode};
use crate::error::{check_stable, Error, Result};

fn int_pow(base: i64, e: i64) -> Rational {
    Rational::from_integer(base.into()).pow(e as i32)
}

fn floor_factor(m: u64, r: u32, base: Rational) -> Rational {
    let fl = m / r as u64;
    base.pow(fl as i32) / Rational::from_integer(factorial(fl))
}

/// `∏ (μ_i/r)^{⌊μ_i/r⌋}/⌊μ_i/r⌋! · r^{2g-2+n+((2g-2+n)s+Σμ)/r} / s^{2g-2+n}`
/// times `∫ C_{g,n}(r,s; r - r⟨μ/r⟩) / ∏(1 - (μ_i/r)ψ_i)`.
///
/// Zero when `(2g-2+n)s + Σμ` is not divisible by `r`.
pub fn closed_form_rhs(r: u32, s: u32, g: u32, mu: &[u64]) -> Result<Rational> {
    check_stable(g, mu.len())?;
    if r == 0 || s == 0 {
        return Err(Error::Invalid(format!("need r, s ≥ 1, got r = {r}, s = {s}")));
    }
    let chi = 2 * g as i64 - 2 + mu.len() as i64;
    let total: i64 = mu.iter().map(|&m| m as i64).sum();
    let (q, rem) = (chi * s as i64 + total).div_rem(&(r as i64));
    if rem != 0 {
        return Ok(Rational::zero());
    }
    let mut pre = int_pow(r as i64, chi + q) / int_pow(s as i64, chi);
    for &m in mu {
        pre *= floor_factor(m, r, rat(m as i64, r as i64));
    }
    Ok(pre * crate::cohft::chiodo_elsv_integral(r, s, g, mu)?)
}

fn hurwitz_prefactor(r: u32, g: u32, mu: &[u64]) -> Rational {
    // r^{1-g+Σ⟨μ/r⟩} ∏ μ^{⌊μ/r⌋}/⌊μ/r⌋!
    let frac: u64 = mu.iter().map(|&m| m % r as u64).sum();
    let mut pre = int_pow(r as i64, 1 - g as i64) * int_pow(r as i64, (frac / r as u64) as i64);
    for &m in mu {
        pre *= floor_factor(m, r, Rational::from_integer((m as i64).into()));
    }
    pre
}

fn checked_hurwitz_input(r: u32, g: u32, mu: &[u64]) -> Result<()> {
    check_stable(g, mu.len())?;
    if r == 0 {
        return Err(Error::Invalid("r must be at least 1".into()));
    }
    let d: u64 = mu.iter().sum();
    if d % r as u64 != 0 {
        return Err(Error::NotDivisible { d, r });
    }
    Ok(())
}

/// `∫ C_{g,n}(r, r; a)` with degree-`k` parts scaled by `λ^k`, against `∏ 1/(1 - c_i ψ_i)`.
fn scaled_integral(r: u32, g: u32, mu: &[u64], lambda: Rational, c: impl Fn(u64) -> Rational, mode: UnitMode) -> Result<Rational> {
    let spec = ChiodoSpec::new(r, r, g, elsv_decorations(r, mu))?;
    let prec = spec.dimension() as i64 + 1;
    let ins: Vec<_> = mu.iter().map(|&m| geometric(&c(m), prec)).collect();
    spec.integrate(&ins, &SumOptions { mode, lambda, ..SumOptions::default() })
}

/// The Johnson–Pandharipande–Tseng value `h_{g;μ}/b!`:
/// `r^{1-g+Σ⟨μ/r⟩} ∏ μ^{⌊μ/r⌋}/⌊μ/r⌋! ∫ Σ(-r)^i λ_i / ∏(1 - μ_i ψ_i)`,
/// with the integrand realised as the `s = r` class, degree `k` scaled by `r^k`.
pub fn jpt_rhs(r: u32, g: u32, mu: &[u64]) -> Result<Rational> {
    checked_hurwitz_input(r, g, mu)?;
    let integral = scaled_integral(r, g, mu, rat(r as i64, 1), |m| rat(m as i64, 1), UnitMode::KappaDecoration)?;
    Ok(hurwitz_prefactor(r, g, mu) * integral)
}

/// Both sides of `∫ Λ(-r)/∏(1 - μψ) = r^{3g-3+n} ∫ Λ(-1)/∏(1 - (μ/r)ψ)`,
/// each evaluated by its own graph sum.
pub fn rescaling_check(r: u32, g: u32, mu: &[u64]) -> Result<(Rational, Rational)> {
    checked_hurwitz_input(r, g, mu)?;
    let lhs = scaled_integral(r, g, mu, rat(r as i64, 1), |m| rat(m as i64, 1), UnitMode::KappaDecoration)?;
    let dim = 3 * g as i64 - 3 + mu.len() as i64;
    let rhs = int_pow(r as i64, dim) * scaled_integral(r, g, mu, Rational::one(), |m| rat(m as i64, r as i64), UnitMode::KappaDecoration)?;
    Ok((lhs, rhs))
}

/// The classical chain for `r = s = 1`: `∏ μ^μ/μ! ∫ Λ(-1)/∏(1 - μψ)`, with the
/// Hodge class assembled from dilaton leaves rather than κ-decorations.
pub fn elsv_rhs(g: u32, mu: &[u64]) -> Result<Rational> {
    checked_hurwitz_input(1, g, mu)?;
    let integral = scaled_integral(1, g, mu, Rational::one(), |m| rat(m as i64, 1), UnitMode::DilatonLeaves)?;
    let mut pre = Rational::one();
    for &m in mu {
        pre *= floor_factor(m, 1, Rational::from_integer((m as i64).into()));
    }
    Ok(pre * integral)
}
