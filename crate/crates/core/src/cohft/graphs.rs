use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use dashmap::DashMap;
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::error::{check_stable, Result};

/// A stable graph with labeled legs `0..n`.
///
/// Vertices carry genera; `legs[i]` is the vertex of leg `i`; `edges` is the
/// sorted multiset of endpoint pairs `(u, v)` with `u ≤ v` (loops have `u = v`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StableGraph {
    genus: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
    automorphisms: u64,
}

type Key = (Vec<u32>, Vec<usize>, Vec<(usize, usize)>);

impl StableGraph {
    pub fn genera(&self) -> &[u32] {
        &self.genus
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.genus.len()
    }

    /// `|Aut Γ|`, counting permutations of half-edges.
    pub fn automorphisms(&self) -> u64 {
        self.automorphisms
    }

    /// Legs plus half-edges at `v`.
    pub fn valence(&self, v: usize) -> usize {
        let legs = self.legs.iter().filter(|&&x| x == v).count();
        let ends: usize = self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum();
        legs + ends
    }

    pub fn genus(&self) -> u32 {
        let h1 = self.edges.len() + 1 - self.vertex_count();
        self.genus.iter().sum::<u32>() + h1 as u32
    }

    fn key(&self) -> Key {
        (self.genus.clone(), self.legs.clone(), self.edges.clone())
    }

    fn relabel(genus: &[u32], legs: &[usize], edges: &[(usize, usize)], perm: &[usize]) -> Key {
        // perm[old] = new
        let mut ng = vec![0; genus.len()];
        for (old, &new) in perm.iter().enumerate() {
            ng[new] = genus[old];
        }
        let nl = legs.iter().map(|&v| perm[v]).collect();
        let mut ne: Vec<_> = edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (perm[a], perm[b]);
                (a.min(b), a.max(b))
            })
            .collect();
        ne.sort_unstable();
        (ng, nl, ne)
    }

    /// Canonical representative together with its automorphism count.
    fn canonical(genus: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Self {
        let nv = genus.len();
        // Vertex invariants fix the block order; permutations run within blocks.
        let invariant = |v: usize| {
            let lv: Vec<usize> = (0..legs.len()).filter(|&i| legs[i] == v).collect();
            let loops = edges.iter().filter(|&&(a, b)| a == v && b == v).count();
            let deg: usize = edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum();
            (genus[v], lv, deg, loops)
        };
        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by_key(|&v| invariant(v));
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for &v in &order {
            match blocks.last_mut() {
                Some(b) if invariant(b[0]) == invariant(v) => b.push(v),
                _ => blocks.push(vec![v]),
            }
        }
        let mut best: Option<Key> = None;
        let mut count = 0u64;
        let mut perm = vec![0usize; nv];
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut off = 0;
        for b in &blocks {
            offsets.push(off);
            off += b.len();
        }
        let mut visit = |perm: &[usize]| {
            let k = Self::relabel(&genus, &legs, &edges, perm);
            match &best {
                Some(b) if *b < k => {}
                Some(b) if *b == k => count += 1,
                _ => {
                    best = Some(k);
                    count = 1;
                }
            }
        };
        block_perms(&blocks, &offsets, 0, &mut perm, &mut visit);
        let (genus, legs, edges) = best.expect("at least one permutation");
        let mut multiplicity: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &e in &edges {
            *multiplicity.entry(e).or_default() += 1;
        }
        let mut aut = count;
        for (&(a, b), &m) in &multiplicity {
            aut *= (1..=m).product::<u64>();
            if a == b {
                aut *= 1 << m;
            }
        }
        StableGraph { genus, legs, edges, automorphisms: aut }
    }

    fn degenerations(&self) -> Vec<StableGraph> {
        let mut out = Vec::new();
        let nv = self.vertex_count();
        for v in 0..nv {
            if self.genus[v] >= 1 {
                let mut genus = self.genus.clone();
                genus[v] -= 1;
                let mut edges = self.edges.clone();
                edges.push((v, v));
                out.push(Self::canonical(genus, self.legs.clone(), edges));
            }
            // attachments at v: legs and edge ends
            let mut slots: Vec<(bool, usize, usize)> = Vec::new();
            for (i, &lv) in self.legs.iter().enumerate() {
                if lv == v {
                    slots.push((true, i, 0));
                }
            }
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if a == v {
                    slots.push((false, e, 0));
                }
                if b == v {
                    slots.push((false, e, 1));
                }
            }
            let k = slots.len();
            for mask in 0u64..(1 << k) {
                let moved = mask.count_ones() as i64;
                for g1 in 0..=self.genus[v] {
                    let g2 = self.genus[v] - g1;
                    let stays = k as i64 - moved;
                    if 2 * g1 as i64 - 2 + stays + 1 <= 0 || 2 * g2 as i64 - 2 + moved + 1 <= 0 {
                        continue;
                    }
                    let w = nv;
                    let mut genus = self.genus.clone();
                    genus[v] = g1;
                    genus.push(g2);
                    let mut legs = self.legs.clone();
                    let mut edges = self.edges.clone();
                    for (j, &(is_leg, idx, end)) in slots.iter().enumerate() {
                        if mask >> j & 1 == 0 {
                            continue;
                        }
                        if is_leg {
                            legs[idx] = w;
                        } else if end == 0 {
                            edges[idx].0 = w;
                        } else {
                            edges[idx].1 = w;
                        }
                    }
                    edges.push((v, w));
                    out.push(Self::canonical(genus, legs, edges));
                }
            }
        }
        out
    }
}

fn block_perms(
    blocks: &[Vec<usize>],
    offsets: &[usize],
    i: usize,
    perm: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if i == blocks.len() {
        visit(perm);
        return;
    }
    let block = &blocks[i];
    let mut idx: Vec<usize> = (0..block.len()).collect();
    loop {
        for (j, &p) in idx.iter().enumerate() {
            perm[block[j]] = offsets[i] + p;
        }
        block_perms(blocks, offsets, i + 1, perm, visit);
        if !next_permutation(&mut idx) {
            break;
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

static GRAPHS: Lazy<DashMap<(u32, usize), Arc<Vec<StableGraph>>>> = Lazy::new(DashMap::new);

/// All stable graphs of genus `g` with `n` legs, sorted, one per isomorphism class.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Arc<Vec<StableGraph>>> {
    check_stable(g, n)?;
    if let Some(v) = GRAPHS.get(&(g, n)) {
        return Ok(v.clone());
    }
    let smooth = StableGraph::canonical(vec![g], vec![0; n], Vec::new());
    let mut all: BTreeSet<StableGraph> = BTreeSet::new();
    let mut frontier: BTreeSet<StableGraph> = BTreeSet::from([smooth]);
    while !frontier.is_empty() {
        let mut next = BTreeSet::new();
        for gr in &frontier {
            for d in gr.degenerations() {
                if !all.contains(&d) && !frontier.contains(&d) {
                    next.insert(d);
                }
            }
        }
        all.extend(std::mem::take(&mut frontier));
        frontier = next;
    }
    let mut list: Vec<_> = all.into_iter().collect();
    list.sort_by_key(|gr| (gr.edges.len(), gr.key()));
    let list = Arc::new(list);
    GRAPHS.insert((g, n), list.clone());
    Ok(list)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Rational};
    use num_traits::Zero;

    fn count(g: u32, n: usize) -> usize {
        enumerate_stable_graphs(g, n).unwrap().len()
    }

    #[test]
    fn small_counts() {
        assert_eq!(count(0, 3), 1);
        assert_eq!(count(1, 1), 2);
        assert_eq!(count(0, 4), 4);
        assert_eq!(count(0, 5), 26);
        assert_eq!(count(1, 2), 5);
        assert_eq!(count(2, 0), 7);
        assert!(enumerate_stable_graphs(0, 2).is_err());
    }

    #[test]
    fn graphs_are_stable_and_of_right_genus() {
        for (g, n) in [(0, 6), (1, 3), (2, 1), (2, 2), (3, 0)] {
            for gr in enumerate_stable_graphs(g, n).unwrap().iter() {
                assert_eq!(gr.genus(), g);
                assert_eq!(gr.legs().len(), n);
                for v in 0..gr.vertex_count() {
                    assert!(2 * gr.genera()[v] as i64 - 2 + gr.valence(v) as i64 > 0);
                }
            }
        }
    }

    #[test]
    fn automorphisms_of_small_graphs() {
        let loops = enumerate_stable_graphs(1, 1).unwrap();
        assert_eq!(loops[1].automorphisms(), 2);
        let g2: Vec<u64> = enumerate_stable_graphs(2, 0).unwrap().iter().map(|g| g.automorphisms()).collect();
        let mut sorted = g2.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 2, 2, 8, 8, 12]);
    }

    #[test]
    fn orbifold_euler_characteristic_of_m04_bar_strata() {
        // χ(M̄_{0,n}) as a sum over open strata, χ(M_{0,k}) = (-1)^{k-3}(k-3)!
        let chi = |k: usize| -> Rational {
            let f: i64 = (1..=(k as i64 - 3)).product();
            int(if (k - 3) % 2 == 0 { f } else { -f })
        };
        for (n, expected) in [(4usize, 2i64), (5, 7)] {
            let mut total = Rational::zero();
            for gr in enumerate_stable_graphs(0, n).unwrap().iter() {
                let mut term = int(1);
                for v in 0..gr.vertex_count() {
                    term *= chi(gr.valence(v));
                }
                total += term / int(gr.automorphisms() as i64);
            }
            // χ(M̄_{0,4}) = χ(P¹) = 2, χ(M̄_{0,5}) = 7
            assert_eq!(total, int(expected));
        }
    }
}
