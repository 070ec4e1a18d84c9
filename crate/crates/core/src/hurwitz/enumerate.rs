use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::{HurwitzQuery, Partition};
use crate::arith::{factorial, Rational};
use crate::error::{Error, Result};

/// Largest degree the brute-force oracle accepts by default.
pub const DEFAULT_CEILING: u64 = 6;

type Perm = Vec<u8>;

/// Orbit labels normalized so that each orbit is named by its first point.
fn normalize(labels: &mut [u8]) {
    let mut map = [u8::MAX; 16];
    let mut next = 0u8;
    for l in labels.iter_mut() {
        if map[*l as usize] == u8::MAX {
            map[*l as usize] = next;
            next += 1;
        }
        *l = map[*l as usize];
    }
}

fn cycle_type(p: &[u8]) -> Vec<u32> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = p[j] as usize;
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// `h_{g;μ}` by iterating over all transposition sequences, tracking the
/// partial product and the orbits of the group generated so far.
pub fn enumerate_oracle(q: &HurwitzQuery) -> Result<Rational> {
    enumerate_oracle_with_ceiling(q, DEFAULT_CEILING)
}

pub fn enumerate_oracle_with_ceiling(q: &HurwitzQuery, ceiling: u64) -> Result<Rational> {
    let d = q.degree();
    if d > ceiling {
        return Err(Error::AboveCeiling { d, ceiling });
    }
    if d > 15 {
        return Err(Error::AboveCeiling { d, ceiling: 15 });
    }
    let d = d as usize;
    let r = q.r as usize;
    let b = q.branch_points() as usize;
    // σ_0 = (0 1 … r-1)(r … 2r-1)⋯
    let sigma0: Perm = (0..d).map(|i| (i / r * r + (i + 1) % r) as u8).collect();
    let orbits0: Vec<u8> = (0..d).map(|i| (i / r) as u8).collect();
    let transpositions: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();

    let mut layer: HashMap<(Perm, Vec<u8>), u128> = HashMap::from([((sigma0, orbits0), 1)]);
    for _ in 0..b {
        layer = layer
            .into_par_iter()
            .fold(HashMap::new, |mut acc: HashMap<(Perm, Vec<u8>), u128>, ((p, orb), c)| {
                for &(i, j) in &transpositions {
                    // p · (i j): apply (i j) first
                    let mut np = p.clone();
                    np.swap(i, j);
                    let mut norb = orb.clone();
                    let (a, bb) = (orb[i], orb[j]);
                    if a != bb {
                        for x in norb.iter_mut() {
                            if *x == bb {
                                *x = a;
                            }
                        }
                        normalize(&mut norb);
                    }
                    *acc.entry((np, norb)).or_default() += c;
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
    }
    let mu = q.mu_partition();
    let target: Vec<u32> = mu.parts().to_vec();
    let mut count: u128 = 0;
    for ((p, orb), c) in layer {
        // σ_∞ = (σ_0 τ_1 ⋯ τ_b)^{-1} has the cycle type of the product.
        if orb.iter().all(|&x| x == 0) && cycle_type(&p) == target {
            count += c;
        }
    }
    let nu = Partition::uniform(q.r, d as u32)?;
    let total = BigInt::from(count) * nu.class_size() * mu.labelings();
    Ok(Rational::new(total, factorial(d as u64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::hurwitz::orbifold_hurwitz;

    fn e(g: u32, r: u32, mu: &[u64]) -> Rational {
        enumerate_oracle(&HurwitzQuery::new(g, r, mu.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(e(0, 1, &[1, 1, 1]), int(24));
        assert_eq!(e(1, 1, &[2]), rat(1, 2));
        assert_eq!(e(0, 1, &[1, 1]), int(1));
        assert_eq!(e(0, 2, &[1, 1, 2]) / int(6), int(4));
        let big = HurwitzQuery::new(0, 1, vec![4, 3]).unwrap();
        assert_eq!(enumerate_oracle(&big), Err(Error::AboveCeiling { d: 7, ceiling: 6 }));
    }

    #[test]
    fn agrees_with_characters() {
        for r in 1..=3u32 {
            for g in 0..=1u32 {
                for mu in [vec![1u64, 1, 1], vec![2, 1], vec![3], vec![2, 2], vec![3, 3], vec![2, 2, 2], vec![4, 2], vec![1, 2, 3]] {
                    let Ok(q) = HurwitzQuery::new(g, r, mu.clone()) else { continue };
                    if q.branch_points() > 7 {
                        continue;
                    }
                    assert_eq!(enumerate_oracle(&q).unwrap(), orbifold_hurwitz(&q).unwrap(), "{q:?}");
                }
            }
        }
    }
}
