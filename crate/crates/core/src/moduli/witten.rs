use dashmap::DashMap;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::arith::{double_factorial, int, rat, Rational};
use crate::error::{check_stable, Result};

static MEMO: Lazy<DashMap<(u32, Vec<u32>), Rational>> = Lazy::new(DashMap::new);

/// `⟨τ_{d_1} ⋯ τ_{d_n}⟩_g`, the integral of `ψ_1^{d_1} ⋯ ψ_n^{d_n}` over `M̄_{g,n}`.
pub fn witten_correlator(g: u32, d: &[u32]) -> Result<Rational> {
    check_stable(g, d.len())?;
    Ok(correlator_unchecked(g, d))
}

/// As [`witten_correlator`], returning zero for unstable `(g, n)`.
pub(crate) fn correlator_unchecked(g: u32, d: &[u32]) -> Rational {
    let n = d.len() as i64;
    if 2 * g as i64 - 2 + n <= 0 || n == 0 {
        return Rational::zero();
    }
    let total: i64 = d.iter().map(|&x| x as i64).sum();
    if total != 3 * g as i64 - 3 + n {
        return Rational::zero();
    }
    let mut key = d.to_vec();
    key.sort_unstable();
    if let Some(v) = MEMO.get(&(g, key.clone())) {
        return v.clone();
    }
    let v = compute(g, &key);
    MEMO.insert((g, key), v.clone());
    v
}

fn without(d: &[u32], i: usize) -> Vec<u32> {
    let mut rest = d.to_vec();
    rest.remove(i);
    rest
}

fn compute(g: u32, d: &[u32]) -> Rational {
    let n = d.len();
    if g == 0 && n == 3 {
        return Rational::one();
    }
    if g == 1 && n == 1 {
        return rat(1, 24);
    }
    // string equation
    if let Some(i) = d.iter().position(|&x| x == 0) {
        let rest = without(d, i);
        let mut acc = Rational::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut e = rest.clone();
                e[j] -= 1;
                acc += correlator_unchecked(g, &e);
            }
        }
        return acc;
    }
    // dilaton equation
    if let Some(i) = d.iter().position(|&x| x == 1) {
        let rest = without(d, i);
        return int(2 * g as i64 - 2 + rest.len() as i64) * correlator_unchecked(g, &rest);
    }
    // DVV with τ_{k+1}, k ≥ 1
    let k = d[0] as i64 - 1;
    let rest = without(d, 0);
    let df = |x: i64| Rational::from_integer(double_factorial(x));
    let mut acc = Rational::zero();
    for j in 0..rest.len() {
        let dj = rest[j] as i64;
        let mut e = rest.clone();
        e[j] = (k + dj) as u32;
        acc += df(2 * k + 2 * dj + 1) / df(2 * dj - 1) * correlator_unchecked(g, &e);
    }
    let mut quad = Rational::zero();
    for a in 0..k {
        let b = k - 1 - a;
        let w = df(2 * a + 1) * df(2 * b + 1);
        let mut inner = Rational::zero();
        if g >= 1 {
            let mut e = rest.clone();
            e.push(a as u32);
            e.push(b as u32);
            inner += correlator_unchecked(g - 1, &e);
        }
        let m = rest.len();
        for mask in 0u64..(1 << m) {
            let (mut left, mut right) = (vec![a as u32], vec![b as u32]);
            for (i, &x) in rest.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            for g1 in 0..=g {
                let l = correlator_unchecked(g1, &left);
                if !l.is_zero() {
                    inner += l * correlator_unchecked(g - g1, &right);
                }
            }
        }
        quad += w * inner;
    }
    (acc + quad / int(2)) / df(2 * k + 3)
}
