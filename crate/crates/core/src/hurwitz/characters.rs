use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use once_cell::sync::Lazy;

use super::Partition;
use crate::error::{Error, Result};

static MEMO: Lazy<DashMap<(Vec<u32>, Vec<u32>), i64>> = Lazy::new(DashMap::new);
static TABLES: Lazy<DashMap<u32, Arc<CharacterTable>>> = Lazy::new(DashMap::new);

/// `χ^λ(μ)` by the Murnaghan–Nakayama rule.
pub fn sd_character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(lambda.size() as usize, mu.size() as usize));
    }
    Ok(mn(lambda.parts(), mu.parts()))
}

fn mn(lambda: &[u32], mu: &[u32]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = MEMO.get(&key) {
        return *v;
    }
    let k = mu[0] as i64;
    let rest = &mu[1..];
    // beta-set of λ: β_i = λ_i + (ℓ - 1 - i)
    let l = lambda.len();
    let beta: Vec<i64> = lambda.iter().enumerate().map(|(i, &p)| p as i64 + (l - 1 - i) as i64).collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        let target = b - k;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut nb = beta.clone();
        nb[i] = target;
        nb.sort_unstable_by(|a, b| b.cmp(a));
        let len = nb.len();
        let shape: Vec<u32> = nb
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (len - 1 - j) as i64) as u32)
            .filter(|&p| p > 0)
            .collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&shape, rest);
    }
    MEMO.insert(key, total);
    total
}

/// The character table of `S_d`, rows and columns indexed by [`Partition::all`].
#[derive(Debug)]
pub struct CharacterTable {
    pub partitions: Vec<Partition>,
    /// `values[λ][μ] = χ^λ(μ)`.
    pub values: Vec<Vec<i64>>,
}

impl CharacterTable {
    /// Shared table for `S_d`, computed once.
    pub fn of(d: u32) -> Arc<CharacterTable> {
        if let Some(t) = TABLES.get(&d) {
            return t.clone();
        }
        let partitions = Partition::all(d);
        let values = partitions
            .iter()
            .map(|l| partitions.iter().map(|m| mn(l.parts(), m.parts())).collect())
            .collect();
        let t = Arc::new(CharacterTable { partitions, values });
        TABLES.insert(d, t.clone());
        t
    }

    pub fn index(&self, mu: &Partition) -> usize {
        self.partitions.iter().position(|p| p == mu).expect("partition of the right size")
    }

    /// `χ^λ(1)`.
    pub fn dimension(&self, lambda: usize) -> i64 {
        self.values[lambda][self.partitions.len() - 1]
    }

    /// Column orthogonality: `Σ_λ χ^λ(μ) χ^λ(ν) = δ_{μν} z_μ`.
    pub fn is_orthogonal(&self) -> bool {
        let k = self.partitions.len();
        (0..k).all(|a| {
            (0..k).all(|b| {
                let dot: BigInt = self.values.iter().map(|row| BigInt::from(row[a]) * row[b]).sum();
                let expect = if a == b { self.partitions[a].centralizer() } else { BigInt::from(0) };
                dot == expect
            })
        })
    }
}
