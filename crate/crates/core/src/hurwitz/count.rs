use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::characters::CharacterTable;
use super::Partition;
use crate::arith::{binomial, factorial, set_partitions, Rational};
use crate::error::{Error, Result};

/// Connected covers of genus `g` with profile `(r, …, r)` over 0, labeled
/// poles of orders `μ_1, …, μ_n` over ∞ and `b` simple branch points.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HurwitzQuery {
    pub g: u32,
    pub r: u32,
    pub mu: Vec<u64>,
}

impl HurwitzQuery {
    pub fn new(g: u32, r: u32, mu: Vec<u64>) -> Result<Self> {
        if r == 0 || mu.is_empty() || mu.contains(&0) {
            return Err(Error::Invalid("need r ≥ 1 and a nonempty μ of positive parts".into()));
        }
        let q = HurwitzQuery { g, r, mu };
        if q.degree() % r as u64 != 0 {
            return Err(Error::NotDivisible { d: q.degree(), r });
        }
        if q.branch_points() < 0 {
            return Err(Error::Invalid(format!("no covers: b = {} < 0", q.branch_points())));
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.mu.len()
    }

    pub fn degree(&self) -> u64 {
        self.mu.iter().sum()
    }

    /// `b = 2g - 2 + n + d/r`.
    pub fn branch_points(&self) -> i64 {
        2 * self.g as i64 - 2 + self.n() as i64 + (self.degree() / self.r as u64) as i64
    }

    pub fn mu_partition(&self) -> Partition {
        Partition::new(self.mu.iter().map(|&m| m as u32).collect()).expect("positive parts")
    }
}

/// `(1/d!) · #{(σ_0, τ_1, …, τ_b, σ_∞, labeling)}` with `σ_0` of type `ν`,
/// transpositions `τ_i`, `σ_∞` of type `μ`, product the identity and the
/// cycles of `σ_∞` labeled by `1..n` respecting lengths. Not necessarily
/// transitive.
pub fn disconnected_count(nu: &Partition, mu: &Partition, b: u32) -> Result<Rational> {
    let d = nu.size();
    if mu.size() != d {
        return Err(Error::SizeMismatch(nu.size() as usize, mu.size() as usize));
    }
    if d == 0 {
        return Ok(if b == 0 { Rational::one() } else { Rational::zero() });
    }
    if d == 1 {
        return Ok(if b == 0 { Rational::one() } else { Rational::zero() });
    }
    let table = CharacterTable::of(d);
    let transposition = {
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, d as usize - 2));
        Partition::new(parts)?
    };
    let (i_nu, i_mu, i_t) = (table.index(nu), table.index(mu), table.index(&transposition));
    let mut sum = Rational::zero();
    for l in 0..table.partitions.len() {
        let dim = BigInt::from(table.dimension(l));
        let num = BigInt::from(table.values[l][i_nu])
            * BigInt::from(table.values[l][i_t]).pow(b)
            * BigInt::from(table.values[l][i_mu]);
        sum += Rational::new(num, dim.pow(b));
    }
    let dfact = factorial(d as u64);
    let classes = nu.class_size() * transposition.class_size().pow(b) * mu.class_size();
    let tuples = sum * Rational::new(classes, dfact.clone());
    Ok(tuples * Rational::from_integer(mu.labelings()) / Rational::from_integer(dfact))
}

static CONNECTED: Lazy<DashMap<(u32, Vec<u64>, u32), Rational>> = Lazy::new(DashMap::new);

/// Connected labeled count `h_{g;μ}` by inclusion–exclusion over the ways the
/// labeled poles split among components.
pub fn orbifold_hurwitz(q: &HurwitzQuery) -> Result<Rational> {
    let b = q.branch_points() as u32;
    Ok(connected(q.r, &q.mu, b))
}

fn connected(r: u32, mu: &[u64], b: u32) -> Rational {
    let mut key_mu = mu.to_vec();
    key_mu.sort_unstable();
    let key = (r, key_mu.clone(), b);
    if let Some(v) = CONNECTED.get(&key) {
        return v.clone();
    }
    let mu = key_mu;
    let d: u64 = mu.iter().sum();
    let nu = Partition::uniform(r, d as u32).expect("r divides d");
    let muv = Partition::new(mu.iter().map(|&m| m as u32).collect()).expect("positive parts");
    let mut value = disconnected_count(&nu, &muv, b).expect("sizes agree");
    for partition in set_partitions(mu.len()) {
        if partition.len() < 2 {
            continue;
        }
        let blocks: Vec<Vec<u64>> = partition.iter().map(|bl| bl.iter().map(|&i| mu[i]).collect()).collect();
        if blocks.iter().any(|bl| bl.iter().sum::<u64>() % r as u64 != 0) {
            continue;
        }
        value -= split_branch_points(r, &blocks, b);
    }
    CONNECTED.insert(key, value.clone());
    value
}

/// `Σ_{b_1 + … + b_k = b} (b; b_1, …, b_k) ∏ h(block_i, b_i)` over admissible `b_i`.
fn split_branch_points(r: u32, blocks: &[Vec<u64>], b: u32) -> Rational {
    fn rec(r: u32, blocks: &[Vec<u64>], left: u32, acc: Rational, total: &mut Rational) {
        let (first, rest) = match blocks.split_first() {
            Some(x) => x,
            None => {
                if left == 0 {
                    *total += acc;
                }
                return;
            }
        };
        // Riemann–Hurwitz: b_i = 2g_i - 2 + n_i + d_i/r with g_i ≥ 0.
        let min = first.len() as i64 + (first.iter().sum::<u64>() / r as u64) as i64 - 2;
        let mut bi = min.max(0) as u32;
        if (bi as i64 - min) % 2 != 0 {
            bi += 1;
        }
        while bi <= left {
            let h = connected(r, first, bi);
            if !h.is_zero() {
                let choose = Rational::from_integer(binomial(left as u64, bi as u64));
                rec(r, rest, left - bi, &acc * h * choose, total);
            }
            bi += 2;
        }
    }
    let mut total = Rational::zero();
    rec(r, blocks, b, Rational::one(), &mut total);
    total
}
