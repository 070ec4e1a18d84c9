use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::factorial;
use crate::error::{Error, Result};

/// An integer partition, parts in weakly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    /// `(k, k, …, k)` of size `d`; `k` must divide `d`.
    pub fn uniform(k: u32, d: u32) -> Result<Self> {
        if k == 0 || d % k != 0 {
            return Err(Error::NotDivisible { d: d as u64, r: k });
        }
        Ok(Partition(vec![k; (d / k) as usize]))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicities `c_m` of each part size `m`.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((m, c)) if *m == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `∏ c_m!`, the number of ways to label the parts respecting their sizes.
    pub fn labelings(&self) -> BigInt {
        self.multiplicities().iter().map(|&(_, c)| factorial(c as u64)).product()
    }

    /// Order of the centralizer of a permutation of this cycle type.
    pub fn centralizer(&self) -> BigInt {
        self.multiplicities()
            .iter()
            .map(|&(m, c)| BigInt::from(m).pow(c) * factorial(c as u64))
            .product()
    }

    /// Size of the conjugacy class of this cycle type in `S_d`.
    pub fn class_size(&self) -> BigInt {
        factorial(self.size() as u64) / self.centralizer()
    }

    /// `+1` for even permutations of this type, `-1` for odd ones.
    pub fn sign(&self) -> i64 {
        if (self.size() as usize - self.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// All partitions of `d`, in reverse lexicographic order.
    pub fn all(d: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=max.min(rest)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(d, d, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let p = Partition::new(vec![1, 3, 1]).unwrap();
        assert_eq!(p.parts(), &[3, 1, 1]);
        assert_eq!(p.size(), 5);
        assert_eq!(p.centralizer(), BigInt::from(6));
        assert_eq!(p.class_size(), BigInt::from(20));
        assert_eq!(p.labelings(), BigInt::from(2));
        assert_eq!(p.sign(), 1);
        assert!(Partition::new(vec![0, 1]).is_err());
        assert!(Partition::uniform(2, 5).is_err());
        let counts: Vec<usize> = (1..=8).map(|d| Partition::all(d).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
        for d in 1..=7u32 {
            let total: BigInt = Partition::all(d).iter().map(Partition::class_size).sum();
            assert_eq!(total, factorial(d as u64));
        }
    }
}
