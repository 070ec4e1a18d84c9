use std::sync::RwLock;

use dashmap::DashMap;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::{binomial, Rational};

static NUMBERS: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![Rational::one()]));
static POLY_VALUES: Lazy<DashMap<(u32, Rational), Rational>> = Lazy::new(DashMap::new);

/// Bernoulli number `B_n` with the convention `B_1 = -1/2`.
pub fn bernoulli_number(n: u32) -> Rational {
    let n = n as usize;
    if let Some(b) = NUMBERS.read().expect("bernoulli table poisoned").get(n) {
        return b.clone();
    }
    let mut table = NUMBERS.write().expect("bernoulli table poisoned");
    while table.len() <= n {
        // Σ_{k=0}^{m} C(m+1, k) B_k = 0
        let m = table.len();
        let s = table
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (k, b)| acc + b * Rational::from_integer(binomial(m as u64 + 1, k as u64)));
        table.push(-s / Rational::from_integer((m as i64 + 1).into()));
    }
    table[n].clone()
}

/// `B_m(q) = Σ_k C(m, k) B_k q^{m-k}`, memoized.
pub fn bernoulli_polynomial(m: u32, q: &Rational) -> Rational {
    let key = (m, q.clone());
    if let Some(v) = POLY_VALUES.get(&key) {
        return v.clone();
    }
    let mut acc = Rational::zero();
    let mut qpow = Rational::one();
    for k in (0..=m).rev() {
        acc += bernoulli_number(k) * Rational::from_integer(binomial(m as u64, k as u64)) * &qpow;
        qpow *= q;
    }
    POLY_VALUES.entry(key).or_insert(acc).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use num_traits::Pow;
    use proptest::prelude::*;

    #[test]
    fn numbers() {
        let expected = [rat(1, 1), rat(-1, 2), rat(1, 6), int(0), rat(-1, 30), int(0), rat(1, 42)];
        for (n, b) in expected.iter().enumerate() {
            assert_eq!(&bernoulli_number(n as u32), b);
        }
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(bernoulli_polynomial(1, &rat(1, 2)), int(0));
        assert_eq!(bernoulli_polynomial(2, &int(0)), rat(1, 6));
        assert_eq!(bernoulli_polynomial(2, &int(1)), rat(1, 6));
        assert_eq!(bernoulli_polynomial(3, &rat(1, 3)), rat(1, 27));
        assert_eq!(bernoulli_polynomial(2, &rat(1, 2)), rat(-1, 12));
        assert_eq!(bernoulli_polynomial(2, &rat(3, 2)), rat(11, 12));
    }

    #[test]
    fn generating_function() {
        // t e^{qt}/(e^t - 1) = Σ B_m(q) t^m/m!; check via (e^t - 1)·Σ = t e^{qt} coefficientwise.
        let q = rat(2, 5);
        for n in 1..12u32 {
            let lhs = (0..n).fold(Rational::zero(), |acc, m| {
                let fact_ratio = Rational::from_integer(binomial(n as u64, m as u64));
                acc + fact_ratio * bernoulli_polynomial(m, &q)
            });
            // n! [t^n] t e^{qt} = n q^{n-1}
            assert_eq!(lhs, int(n as i64) * q.clone().pow((n - 1) as i32), "n={n}");
        }
    }

    proptest! {
        #[test]
        fn difference_equation(m in 1u32..12, p in -20i64..20, d in 1i64..9) {
            let q = rat(p, d);
            let lhs = bernoulli_polynomial(m, &(&q + int(1))) - bernoulli_polynomial(m, &q);
            prop_assert_eq!(lhs, int(m as i64) * q.clone().pow((m - 1) as i32));
        }

        #[test]
        fn reflection(m in 0u32..12, p in 0i64..20, d in 1i64..9) {
            let q = rat(p, d);
            let lhs = bernoulli_polynomial(m + 1, &(int(1) - &q));
            let sign = if (m + 1) % 2 == 0 { int(1) } else { int(-1) };
            prop_assert_eq!(lhs, sign * bernoulli_polynomial(m + 1, &q));
        }
    }
}
