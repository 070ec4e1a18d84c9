use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::witten::correlator_unchecked;
use crate::arith::{set_partitions, Rational};
use crate::error::{check_stable, Error, Result};

/// An integral `∫ ∏ ψ_i^{d_i} ∏ κ_{b_j}` over `M̄_{g,n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PsiKappaQuery {
    pub g: u32,
    pub d: Vec<u32>,
    pub kappa: Vec<u32>,
}

impl PsiKappaQuery {
    pub fn new(g: u32, d: Vec<u32>, kappa: Vec<u32>) -> Result<Self> {
        check_stable(g, d.len())?;
        if kappa.contains(&0) {
            return Err(Error::Invalid("κ indices must be positive".into()));
        }
        Ok(PsiKappaQuery { g, d, kappa })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn degree(&self) -> u32 {
        self.d.iter().sum::<u32>() + self.kappa.iter().sum::<u32>()
    }

    pub fn dimension(&self) -> i64 {
        3 * self.g as i64 - 3 + self.n() as i64
    }

    /// Order-independent key: genus, sorted ψ exponents, sorted κ indices.
    pub fn canonical_key(&self) -> String {
        let mut d = self.d.clone();
        d.sort_unstable();
        let mut k = self.kappa.clone();
        k.sort_unstable();
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        format!("{};{};{}", self.g, join(&d), join(&k))
    }

    /// Inverse of [`canonical_key`](Self::canonical_key).
    pub fn from_key(key: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("malformed intersection key {key:?}"));
        let mut parts = key.split(';');
        let g = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let list = |s: Option<&str>| -> Result<Vec<u32>> {
            let s = s.ok_or_else(bad)?;
            if s.is_empty() {
                return Ok(Vec::new());
            }
            s.split(',').map(|x| x.parse().map_err(|_| bad())).collect()
        };
        let d = list(parts.next())?;
        let kappa = list(parts.next())?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Self::new(g, d, kappa)
    }
}

impl fmt::Display for PsiKappaQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for d in &self.d {
            write!(f, "τ_{d} ")?;
        }
        for k in &self.kappa {
            write!(f, "κ_{k} ")?;
        }
        write!(f, ">_{}", self.g)
    }
}

/// Mixed ψ–κ integral.
///
/// Each κ monomial is pushed down from extra marked points:
/// `∏ κ_{b_j} = Σ_P (-1)^{m-|P|} π_*(∏_{B∈P} ψ^{1 + Σ_{j∈B} b_j})`.
pub fn kappa_psi_integral(q: &PsiKappaQuery) -> Result<Rational> {
    check_stable(q.g, q.n())?;
    if q.degree() as i64 != q.dimension() {
        return Ok(Rational::zero());
    }
    if q.kappa.is_empty() {
        return Ok(correlator_unchecked(q.g, &q.d));
    }
    let m = q.kappa.len();
    let mut acc = Rational::zero();
    for partition in set_partitions(m) {
        let mut d = q.d.clone();
        d.extend(partition.iter().map(|block| 1 + block.iter().map(|&j| q.kappa[j]).sum::<u32>()));
        let v = correlator_unchecked(q.g, &d);
        if (m - partition.len()) % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn kp(g: u32, d: &[u32], k: &[u32]) -> Rational {
        kappa_psi_integral(&PsiKappaQuery::new(g, d.to_vec(), k.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(kp(1, &[0], &[1]), rat(1, 24));
        assert_eq!(kp(0, &[0, 0, 0, 0], &[1]), int(1));
        assert_eq!(kp(0, &[0, 0, 0], &[]), int(1));
        // κ_1 on M̄_{0,5} squared: 5
        assert_eq!(kp(0, &[0; 5], &[1, 1]), int(5));
        // κ_2 on M̄_{0,5} equals ψ^3 pushed down minus nothing: 1
        assert_eq!(kp(0, &[0; 5], &[2]), int(1));
        // ψ_1 on M̄_{0,4}
        assert_eq!(kp(0, &[1, 0, 0, 0], &[]), int(1));
        assert!(PsiKappaQuery::new(1, vec![], vec![1]).is_err());
        assert!(PsiKappaQuery::new(1, vec![0], vec![0]).is_err());
    }

    #[test]
    fn keys_round_trip() {
        let q = PsiKappaQuery::new(2, vec![3, 0, 1], vec![2, 1]).unwrap();
        assert_eq!(q.canonical_key(), "2;0,1,3;1,2");
        let back = PsiKappaQuery::from_key(&q.canonical_key()).unwrap();
        assert_eq!(back.canonical_key(), q.canonical_key());
        let empty = PsiKappaQuery::new(0, vec![0, 0, 0], vec![]).unwrap();
        assert_eq!(PsiKappaQuery::from_key(&empty.canonical_key()).unwrap(), empty);
        assert!(PsiKappaQuery::from_key("x;1").is_err());
    }

    #[test]
    fn kappa_one_is_pushforward_of_psi_squared() {
        // ⟨κ_1 ∏τ⟩ = ⟨τ_2 ∏τ⟩ for a single κ
        for (g, d) in [(1u32, vec![1u32]), (2, vec![2, 2]), (1, vec![0, 1, 1])] {
            let mut e = d.clone();
            e.push(2);
            assert_eq!(kp(g, &d, &[1]), crate::moduli::witten_correlator(g, &e).unwrap());
        }
    }
}
