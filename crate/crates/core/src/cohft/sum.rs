use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::givental::{reduce, EdgeSeries, GiventalData, UnitMode};
use super::graphs::{enumerate_stable_graphs, StableGraph};
use crate::arith::{int, rat, Rational};
use crate::error::{check_stable, Error, Result};
use crate::moduli::{IntersectionCache, PsiKappaQuery};
use crate::series::Series;

/// The class `C_{g,n}(r, s; a_1, …, a_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChiodoSpec {
    pub r: u32,
    pub s: u32,
    pub g: u32,
    pub a: Vec<u32>,
}

impl ChiodoSpec {
    pub fn new(r: u32, s: u32, g: u32, a: Vec<u32>) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be at least 1".into()));
        }
        if let Some(&bad) = a.iter().find(|&&x| x == 0 || x > r) {
            return Err(Error::Invalid(format!("decoration {bad} outside 1..={r}")));
        }
        check_stable(g, a.len())?;
        Ok(ChiodoSpec { r, s, g, a })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn dimension(&self) -> usize {
        (3 * self.g as i64 - 3 + self.n() as i64) as usize
    }

    /// `(2g - 2 + n)s - Σ a_i ≡ 0 mod r`; the class vanishes otherwise.
    pub fn congruence_holds(&self) -> bool {
        let total: i64 = self.a.iter().map(|&x| x as i64).sum();
        (self.s as i64 * (2 * self.g as i64 - 2 + self.n() as i64) - total).rem_euclid(self.r as i64) == 0
    }

    /// `∫ C_{g,n}(r,s;a) ∏ f_i(ψ_i)` for power series insertions `f_i`.
    pub fn integrate(&self, insertions: &[Series<Rational>], opts: &SumOptions) -> Result<Rational> {
        if insertions.len() != self.n() {
            return Err(Error::SizeMismatch(insertions.len(), self.n()));
        }
        if !self.congruence_holds() {
            return Ok(Rational::zero());
        }
        let data = GiventalData::new(self.r, self.s)?.scaled(opts.lambda.clone());
        graph_sum(&data, self.g, &self.a, insertions, opts.mode, opts.cache)
    }
}

/// Evaluation options for [`ChiodoSpec::integrate`].
#[derive(Clone, Debug)]
pub struct SumOptions<'a> {
    pub mode: UnitMode,
    /// Rescales every cohomological degree `k` by `λ^k`.
    pub lambda: Rational,
    pub cache: &'a IntersectionCache,
}

impl Default for SumOptions<'static> {
    fn default() -> Self {
        SumOptions { mode: UnitMode::KappaDecoration, lambda: Rational::one(), cache: IntersectionCache::global() }
    }
}

/// `∫ C_{g,n}(r,s;a) ∏ ψ_i^{d_i}`.
pub fn chiodo_integral(spec: &ChiodoSpec, d: &[u32]) -> Result<Rational> {
    chiodo_integral_with(spec, d, UnitMode::KappaDecoration)
}

pub fn chiodo_integral_with(spec: &ChiodoSpec, d: &[u32], mode: UnitMode) -> Result<Rational> {
    let prec = spec.dimension() as i64 + 1;
    let ins: Vec<_> = d.iter().map(|&k| Series::monomial(Rational::one(), k as i64).truncate(prec)).collect();
    spec.integrate(&ins, &SumOptions { mode, ..SumOptions::default() })
}

/// `a_i = r - (μ_i mod r)`, with `r` in place of `0`.
pub fn elsv_decorations(r: u32, mu: &[u64]) -> Vec<u32> {
    mu.iter().map(|&m| reduce(r as i64 - (m % r as u64) as i64, r)).collect()
}

/// `1/(1 - cψ)` to `O(ψ^prec)`.
pub(crate) fn geometric(c: &Rational, prec: i64) -> Series<Rational> {
    let mut coeffs = Vec::with_capacity(prec as usize);
    let mut p = Rational::one();
    for _ in 0..prec {
        coeffs.push(p.clone());
        p *= c;
    }
    Series::rational(coeffs, prec)
}

/// `∫ C_{g,n}(r,s; r - r⟨μ/r⟩) / ∏(1 - (μ_i/r)ψ_i)`.
pub fn chiodo_elsv_integral(r: u32, s: u32, g: u32, mu: &[u64]) -> Result<Rational> {
    let spec = ChiodoSpec::new(r, s, g, elsv_decorations(r, mu))?;
    let prec = spec.dimension() as i64 + 1;
    let ins: Vec<_> = mu.iter().map(|&m| geometric(&rat(m as i64, r as i64), prec)).collect();
    spec.integrate(&ins, &SumOptions::default())
}

/// Partitions of `k` as multiplicity vectors (index `m` holds the count of part `m`).
fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for m in (1..=max.min(rest)).rev() {
            cur[m] += 1;
            rec(rest - m, m, cur, out);
            cur[m] -= 1;
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut vec![0; k + 1], &mut out);
    out
}

struct Context<'a> {
    mode: UnitMode,
    unit: Vec<Rational>,
    legs: Vec<Series<Rational>>,
    edges: Vec<EdgeSeries>,
    cache: &'a IntersectionCache,
}

impl Context<'_> {
    /// `∫_{M̄_{g,n}} ∏_legs f(ψ) ∏_half ψ^e · (unit decoration)`, with
    /// the TFT factor left out.
    fn vertex(&self, g: u32, legs: &[usize], half: &[u32]) -> Result<Rational> {
        let n = legs.len() + half.len();
        let dim = 3 * g as i64 - 3 + n as i64;
        let used: i64 = half.iter().map(|&e| e as i64).sum();
        if used > dim {
            return Ok(Rational::zero());
        }
        let budget = (dim - used) as usize;
        let mut total = Rational::zero();
        let mut ks = vec![0usize; legs.len()];
        self.leg_terms(g, legs, half, budget, 0, &mut ks, &Rational::one(), &mut total)?;
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn leg_terms(
        &self,
        g: u32,
        legs: &[usize],
        half: &[u32],
        budget: usize,
        i: usize,
        ks: &mut Vec<usize>,
        weight: &Rational,
        total: &mut Rational,
    ) -> Result<()> {
        if i == legs.len() {
            let mut d: Vec<u32> = ks.iter().map(|&k| k as u32).collect();
            d.extend_from_slice(half);
            *total += weight * self.unit_terms(g, &d, budget)?;
            return Ok(());
        }
        for k in 0..=budget {
            let c = self.legs[legs[i]].coeff(k as i64);
            if c.is_zero() {
                continue;
            }
            ks[i] = k;
            self.leg_terms(g, legs, half, budget - k, i + 1, ks, &(weight * c), total)?;
        }
        Ok(())
    }

    /// Sum over the unit decoration of total degree `k` on top of `d`.
    fn unit_terms(&self, g: u32, d: &[u32], k: usize) -> Result<Rational> {
        let mut total = Rational::zero();
        'outer: for mult in partitions(k) {
            let mut coef = Rational::one();
            let mut extra = Vec::new();
            for (m, &c) in mult.iter().enumerate().skip(1) {
                if c == 0 {
                    continue;
                }
                let u = &self.unit[m];
                if u.is_zero() {
                    continue 'outer;
                }
                let fact: i64 = (1..=c as i64).product();
                coef *= u.pow(c as i32) / int(fact);
                extra.extend(std::iter::repeat_n(m as u32, c));
            }
            let q = match self.mode {
                UnitMode::KappaDecoration => PsiKappaQuery::new(g, d.to_vec(), extra)?,
                UnitMode::DilatonLeaves => {
                    let mut dd = d.to_vec();
                    dd.extend(extra.iter().map(|&m| m + 1));
                    PsiKappaQuery::new(g, dd, Vec::new())?
                }
            };
            total += coef * self.cache.get_or_compute(&q)?;
        }
        Ok(total)
    }
}

fn graph_sum(
    data: &GiventalData,
    g: u32,
    a: &[u32],
    insertions: &[Series<Rational>],
    mode: UnitMode,
    cache: &IntersectionCache,
) -> Result<Rational> {
    let n = a.len();
    let dim = (3 * g as i64 - 3 + n as i64) as usize;
    let unit = match mode {
        UnitMode::KappaDecoration => data.kappa_exponent(dim),
        UnitMode::DilatonLeaves => data.dilaton_leaf_series(dim)?,
    };
    let ctx = Context {
        mode,
        unit: (0..=dim).map(|m| unit.coeff(m as i64)).collect(),
        legs: insertions
            .iter()
            .zip(a)
            .map(|(f, &ai)| f.truncate(dim as i64 + 1).mul(&data.r_inverse(ai, dim)))
            .collect(),
        edges: (1..=data.r()).map(|b| data.edge_series(b, dim)).collect(),
        cache,
    };
    let graphs = enumerate_stable_graphs(g, n)?;
    let terms: Vec<Rational> =
        graphs.par_iter().map(|gr| graph_term(data, &ctx, gr, a)).collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(Rational::zero(), |acc, t| acc + t))
}

fn graph_term(data: &GiventalData, ctx: &Context<'_>, gr: &StableGraph, a: &[u32]) -> Result<Rational> {
    let r = data.r();
    let nv = gr.vertex_count();
    let edges = gr.edges();
    let dims: Vec<i64> = (0..nv).map(|v| 3 * gr.genera()[v] as i64 - 3 + gr.valence(v) as i64).collect();
    let legs_at: Vec<Vec<usize>> = (0..nv).map(|v| (0..a.len()).filter(|&i| gr.legs()[i] == v).collect()).collect();
    // Half-edge slots per vertex in a fixed order: (edge, end).
    let mut slots: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (e, &(u, w)) in edges.iter().enumerate() {
        slots[u].push((e, 0));
        slots[w].push((e, 1));
    }

    // Vertex integrals depend only on the ψ-exponents at half-edges.
    let mut memo: HashMap<(usize, Vec<u32>), Rational> = HashMap::new();
    let mut exps = vec![(0u32, 0u32); edges.len()];
    let mut weights: Vec<(Vec<(u32, u32)>, Rational)> = Vec::new();
    let mut used = vec![0i64; nv];
    collect_exponents(0, edges, &dims, &mut used, &mut exps, &mut |ex| {
        let mut prod = Rational::one();
        for v in 0..nv {
            let half: Vec<u32> =
                slots[v].iter().map(|&(e, end)| if end == 0 { ex[e].0 } else { ex[e].1 }).collect();
            let key = (v, half);
            let val = match memo.get(&key) {
                Some(x) => x.clone(),
                None => {
                    let x = ctx.vertex(gr.genera()[v], &legs_at[v], &key.1)?;
                    memo.insert(key, x.clone());
                    x
                }
            };
            if val.is_zero() {
                return Ok(());
            }
            prod *= val;
        }
        weights.push((ex.to_vec(), prod));
        Ok(())
    })?;
    if weights.is_empty() {
        return Ok(Rational::zero());
    }

    let mut total = Rational::zero();
    let mut deco = vec![1u32; edges.len()];
    loop {
        let mut tft = Rational::one();
        for v in 0..nv {
            let mut labels: Vec<u32> = legs_at[v].iter().map(|&i| a[i]).collect();
            for &(e, end) in &slots[v] {
                labels.push(if end == 0 { deco[e] } else { reduce(r as i64 - deco[e] as i64, r) });
            }
            tft *= data.tft_value(gr.genera()[v], &labels);
            if tft.is_zero() {
                break;
            }
        }
        if !tft.is_zero() {
            let mut edge_sum = Rational::zero();
            for (ex, w) in &weights {
                let mut p = w.clone();
                for (e, &(j, k)) in ex.iter().enumerate() {
                    p *= ctx.edges[deco[e] as usize - 1].coeff(j as usize, k as usize);
                    if p.is_zero() {
                        break;
                    }
                }
                edge_sum += p;
            }
            total += tft * edge_sum;
        }
        // next decoration
        let mut i = 0;
        while i < deco.len() && deco[i] == r {
            deco[i] = 1;
            i += 1;
        }
        if i == deco.len() {
            break;
        }
        deco[i] += 1;
    }
    Ok(total / int(gr.automorphisms() as i64))
}

fn collect_exponents(
    e: usize,
    edges: &[(usize, usize)],
    dims: &[i64],
    used: &mut [i64],
    exps: &mut Vec<(u32, u32)>,
    f: &mut impl FnMut(&[(u32, u32)]) -> Result<()>,
) -> Result<()> {
    if e == edges.len() {
        return f(exps);
    }
    let (u, w) = edges[e];
    for j in 0..=(dims[u] - used[u]).max(-1) {
        used[u] += j;
        for k in 0..=(dims[w] - used[w]).max(-1) {
            used[w] += k;
            exps[e] = (j as u32, k as u32);
            collect_exponents(e + 1, edges, dims, used, exps, f)?;
            used[w] -= k;
        }
        used[u] -= j;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(r: u32, s: u32, g: u32, a: &[u32], d: &[u32]) -> Rational {
        chiodo_integral(&ChiodoSpec::new(r, s, g, a.to_vec()).unwrap(), d).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(ci(1, 1, 1, &[1], &[1]), rat(1, 24));
        assert_eq!(ci(1, 1, 1, &[1], &[0]), rat(-1, 24));
        assert_eq!(ci(2, 2, 0, &[1, 1, 1], &[0, 0, 0]), int(0));
        assert_eq!(chiodo_elsv_integral(1, 1, 0, &[1, 1, 1]).unwrap(), int(1));
        assert_eq!(chiodo_elsv_integral(2, 2, 0, &[1, 1, 2]).unwrap(), rat(1, 2));
        assert_eq!(chiodo_elsv_integral(1, 1, 1, &[2]).unwrap(), rat(1, 24));
        assert!(ChiodoSpec::new(2, 2, 0, vec![1, 1]).is_err());
        assert!(ChiodoSpec::new(2, 2, 0, vec![1, 1, 3]).is_err());
    }

    #[test]
    fn hodge_integrals_for_r_equal_one() {
        // r = s = 1 gives 1 - λ_1 + λ_2 - …; the λ_g formula
        // ∫ ψ^d λ_g = binom(2g-3+n; d) b_g pins the top-degree part.
        assert_eq!(ci(1, 1, 1, &[1, 1], &[1, 0]), rat(-1, 24));
        assert_eq!(ci(1, 1, 1, &[1, 1, 1], &[1, 1, 0]), rat(-1, 12));
        assert_eq!(ci(1, 1, 2, &[1], &[2]), rat(7, 5760));
        assert_eq!(ci(1, 1, 2, &[1], &[4]), rat(1, 1152));
    }

    #[test]
    fn degree_zero_is_the_tft() {
        for r in 1..=3u32 {
            for s in 0..=r {
                let d = GiventalData::new(r, s).unwrap();
                for a in [[1u32, 1, 1], [1, 2, 3], [r, r, r]] {
                    let a: Vec<u32> = a.iter().map(|&x| reduce(x as i64, r)).collect();
                    assert_eq!(ci(r, s, 0, &a, &[0, 0, 0]), d.tft_value(0, &a));
                }
            }
        }
    }

    /// Every `(a, d)` of full degree for small `(g, n)`, with `a` in `1..=r`.
    fn instances(r: u32, max_dim: i64) -> Vec<(u32, Vec<u32>, Vec<u32>)> {
        let mut out = Vec::new();
        for g in 0..=1u32 {
            for n in 1..=4usize {
                let dim = 3 * g as i64 - 3 + n as i64;
                if 2 * g as i64 - 2 + n as i64 <= 0 || dim > max_dim {
                    continue;
                }
                let total = (r as usize).pow(n as u32);
                for code in 0..total {
                    let a: Vec<u32> = (0..n).map(|i| 1 + (code / (r as usize).pow(i as u32)) as u32 % r).collect();
                    for dcode in 0..(dim as usize + 1).pow(n as u32) {
                        let d: Vec<u32> =
                            (0..n).map(|i| (dcode / (dim as usize + 1).pow(i as u32) % (dim as usize + 1)) as u32).collect();
                        if d.iter().sum::<u32>() as i64 <= dim {
                            out.push((g, a.clone(), d));
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn dilaton_leaves_agree_with_kappa_decorations() {
        for r in 1..=3u32 {
            for s in 1..=r {
                for (g, a, d) in instances(r, 2) {
                    let spec = ChiodoSpec::new(r, s, g, a).unwrap();
                    assert_eq!(
                        chiodo_integral_with(&spec, &d, UnitMode::DilatonLeaves).unwrap(),
                        chiodo_integral(&spec, &d).unwrap(),
                        "{spec:?} d={d:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn s_zero_equals_s_r() {
        for r in 1..=3u32 {
            for (g, a, d) in instances(r, 2) {
                let zero = ChiodoSpec::new(r, 0, g, a.clone()).unwrap();
                let full = ChiodoSpec::new(r, r, g, a).unwrap();
                assert_eq!(chiodo_integral(&zero, &d).unwrap(), chiodo_integral(&full, &d).unwrap());
            }
        }
    }

    #[test]
    fn partitions_are_counted() {
        let p: Vec<usize> = (0..8).map(|k| partitions(k).len()).collect();
        assert_eq!(p, vec![1, 1, 2, 3, 5, 7, 11, 15]);
    }
}
