use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::Zero;
use rayon::prelude::*;

use super::chart::{lift, local_chart, q_inverse, Kernel, SpectralCurveConfig};
use crate::arith::{int, rat, rational_part, Cyclotomic, CyclotomicField, Field, Rational};
use crate::error::{Error, Result};
use crate::series::{RationalFunction, Series};

/// Per-variable `(branch index i, pole order k)` of `φ_{i,k}(u) = (u - ζ^i)^{-k}`.
pub type Key = Vec<(u32, u32)>;

/// `W_{g,n}/(du_1 ⋯ du_n) = Σ_K C_K ∏_j φ_{i_j,k_j}(u_j)` with `C_K ∈ Q(ζ_r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Correlator {
    pub g: u32,
    pub n: usize,
    pub r: u32,
    pub s: u32,
    terms: BTreeMap<Key, Cyclotomic>,
}

impl Correlator {
    pub fn terms(&self) -> &BTreeMap<Key, Cyclotomic> {
        &self.terms
    }

    pub fn coefficient(&self, key: &[(u32, u32)]) -> Option<&Cyclotomic> {
        self.terms.get(key)
    }

    /// Highest pole order in any variable.
    pub fn max_pole_order(&self) -> u32 {
        self.terms.keys().flat_map(|k| k.iter().map(|&(_, p)| p)).max().unwrap_or(0)
    }

    /// The same correlator with variables reordered: variable `j` of the
    /// result is variable `perm[j]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Correlator {
        let terms = self.terms.iter().map(|(k, c)| (perm.iter().map(|&p| k[p]).collect(), c.clone())).collect();
        Correlator { terms, ..self.clone() }
    }

    /// Invariant under every transposition of variables.
    pub fn is_symmetric(&self) -> bool {
        (1..self.n).all(|j| {
            let mut perm: Vec<usize> = (0..self.n).collect();
            perm.swap(0, j);
            self.permuted(&perm) == *self
        })
    }

    /// Checks `W(ζu_1, …, ζu_n) = ζ^{s(2-2g-n)} W(u_1, …, u_n)` coefficientwise.
    pub fn is_rotation_covariant(&self) -> bool {
        let f = CyclotomicField::new(self.r as usize);
        let chi = self.s as i64 * (2 - 2 * self.g as i64 - self.n as i64);
        self.terms.iter().all(|(k, c)| {
            let shifted: Key = k.iter().map(|&(i, p)| ((i + self.r - 1) % self.r, p)).collect();
            let e: i64 = k.iter().map(|&(_, p)| 1 - p as i64).sum::<i64>() - chi;
            let expected = c.times(&Cyclotomic::zeta_pow(&f, e));
            self.terms.get(&shifted).is_some_and(|v| *v == expected)
        })
    }

    /// Value at a point with all `u_j` distinct from the branch points.
    pub fn evaluate(&self, u: &[Cyclotomic]) -> Result<Cyclotomic> {
        if u.len() != self.n {
            return Err(Error::SizeMismatch(u.len(), self.n));
        }
        let f = CyclotomicField::new(self.r as usize);
        let mut total = Cyclotomic::zero_of(&f);
        for (k, c) in &self.terms {
            let mut p = c.clone();
            for (&(i, order), x) in k.iter().zip(u) {
                let d = x.minus(&Cyclotomic::zeta_pow(&f, i as i64));
                p = p.times(&d.inverse().ok_or(Error::PoleAtExpansionPoint)?.power(order));
            }
            total = total.plus(&p);
        }
        Ok(total)
    }

    /// Dependence on variable `j` with the others fixed at `others`
    /// (given in order, skipping `j`), as an exact rational function.
    pub fn univariate(&self, j: usize, others: &[Cyclotomic]) -> Result<RationalFunction<Cyclotomic>> {
        if others.len() + 1 != self.n {
            return Err(Error::SizeMismatch(others.len() + 1, self.n));
        }
        let f = CyclotomicField::new(self.r as usize);
        let mut total = RationalFunction::zero_of(&f);
        for (k, c) in &self.terms {
            let mut p = c.clone();
            let mut it = others.iter();
            for (v, &(i, order)) in k.iter().enumerate() {
                if v == j {
                    continue;
                }
                let x = it.next().expect("length checked");
                let d = x.minus(&Cyclotomic::zeta_pow(&f, i as i64));
                p = p.times(&d.inverse().ok_or(Error::PoleAtExpansionPoint)?.power(order));
            }
            let (i, order) = k[j];
            let pole = RationalFunction::pole(&Cyclotomic::zeta_pow(&f, i as i64), order);
            total = total.plus(&pole.times(&RationalFunction::from_poly(crate::series::Poly::constant(p))));
        }
        Ok(total)
    }
}

/// Series valued in spectator monomials: key over a subset of variables.
type Tensor = HashMap<Key, Series<Cyclotomic>>;

fn accumulate(t: &mut Tensor, key: Key, s: Series<Cyclotomic>) {
    match t.get_mut(&key) {
        Some(v) => *v = v.add(&s),
        None => {
            t.insert(key, s);
        }
    }
}

/// Rational local data shared by all charts at a fixed truncation order.
struct Workspace {
    r: u32,
    s: u32,
    field: Arc<CyclotomicField>,
    t: Series<Cyclotomic>,
    tp: Series<Cyclotomic>,
    /// `t(w)^m t'(w)` for the expansion of `B(u(w), u_j)`.
    tm_tp: Vec<Series<Cyclotomic>>,
    /// `W_{0,2}(u(w), u(-w))` per `dw²`.
    b_diag: Series<Cyclotomic>,
    kernel: Vec<Series<Cyclotomic>>,
    /// `Ŝ_{δ,k}(w) = t'/(1 - ζ^δ + t)^k` (`t' t^{-k}` for `δ = 0`).
    shat: DashMap<(u32, u32), (Series<Cyclotomic>, Series<Cyclotomic>)>,
}

impl Workspace {
    fn new(r: u32, s: u32, order: usize) -> Result<Self> {
        let field = CyclotomicField::new(r as usize);
        let chart = local_chart(r, 0, order)?;
        let t = lift(&field, &chart.t);
        let tp = t.derivative();
        let mut tm_tp = vec![tp.clone()];
        for m in 1..=order {
            tm_tp.push(tm_tp[m - 1].mul(&t));
        }
        let tq = &chart.t;
        let diff = tq.sub(&tq.reflect());
        let tpq = tq.derivative();
        let b_diag = tpq.mul(&tpq.reflect()).neg().div(&diff.mul(&diff))?;
        let kernel = Kernel::rational_parts(&chart, s, order)?.iter().map(|k| lift(&field, k)).collect();
        Ok(Workspace {
            r,
            s,
            b_diag: lift(&field, &b_diag),
            field,
            t,
            tp,
            tm_tp,
            kernel,
            shat: DashMap::new(),
        })
    }

    fn zeta(&self, e: i64) -> Cyclotomic {
        Cyclotomic::zeta_pow(&self.field, e)
    }

    /// `(Ŝ_{δ,k}(w), -Ŝ_{δ,k}(-w))`.
    fn shat(&self, delta: u32, k: u32) -> Result<(Series<Cyclotomic>, Series<Cyclotomic>)> {
        if let Some(v) = self.shat.get(&(delta, k)) {
            return Ok(v.clone());
        }
        let base = if delta == 0 {
            self.t.clone()
        } else {
            let c = Cyclotomic::one_of(&self.field).minus(&self.zeta(delta as i64));
            self.t.add(&Series::constant(c))
        };
        let s = base.inv()?.pow(k).mul(&self.tp);
        let pair = (s.clone(), s.reflect().neg());
        self.shat.insert((delta, k), pair.clone());
        Ok(pair)
    }

    /// `φ_{i',k'}(u(w)) du/dw` in the chart at `ζ^i`, or at `u(-w)` with `d(u(-w))/dw`.
    fn pulled(&self, chart: u32, branch: u32, k: u32, reflected: bool) -> Result<Series<Cyclotomic>> {
        let delta = (branch + self.r - chart) % self.r;
        let (p, m) = self.shat(delta, k)?;
        let z = self.zeta(chart as i64 * (1 - k as i64));
        Ok(if reflected { m } else { p }.scale(&z))
    }

    /// `B(u(±w), u_j)/(dw du_j)` truncated at `t^{m_max}`, keyed by `(i, m + 2)`.
    fn b_term(&self, chart: u32, m_max: usize, reflected: bool) -> Tensor {
        let mut out = Tensor::new();
        for m in 0..=m_max.min(self.tm_tp.len() - 1) {
            let c = self.zeta(chart as i64 * (m as i64 + 1)).scaled(&int(m as i64 + 1));
            let mut s = self.tm_tp[m].scale(&c);
            if reflected {
                s = s.reflect().neg();
            }
            out.insert(vec![(chart, m as u32 + 2)], s);
        }
        out
    }

    /// First variable of a stable correlator pulled back to the chart.
    fn pull_first(&self, w: &Correlator, chart: u32, reflected: bool) -> Result<Tensor> {
        let mut grouped: HashMap<Key, Vec<((u32, u32), &Cyclotomic)>> = HashMap::new();
        for (k, c) in &w.terms {
            grouped.entry(k[1..].to_vec()).or_default().push((k[0], c));
        }
        let mut out = Tensor::new();
        for (rest, list) in grouped {
            let mut acc: Option<Series<Cyclotomic>> = None;
            for ((b, k), c) in list {
                let s = self.pulled(chart, b, k, reflected)?.scale(c);
                acc = Some(match acc {
                    Some(a) => a.add(&s),
                    None => s,
                });
            }
            if let Some(a) = acc {
                out.insert(rest, a);
            }
        }
        Ok(out)
    }

    /// First two variables of a stable correlator at `u(w)` and `u(-w)`.
    fn pull_pair(&self, w: &Correlator, chart: u32) -> Result<Tensor> {
        let mut grouped: HashMap<Key, HashMap<(u32, u32), Vec<((u32, u32), &Cyclotomic)>>> = HashMap::new();
        for (k, c) in &w.terms {
            grouped.entry(k[2..].to_vec()).or_default().entry(k[0]).or_default().push((k[1], c));
        }
        let mut out = Tensor::new();
        for (rest, firsts) in grouped {
            let mut acc = Series::zero(&self.field, crate::series::EXACT);
            for ((b0, k0), seconds) in firsts {
                let mut inner = Series::zero(&self.field, crate::series::EXACT);
                for ((b1, k1), c) in seconds {
                    inner = inner.add(&self.pulled(chart, b1, k1, true)?.scale(c));
                }
                acc = acc.add(&self.pulled(chart, b0, k0, false)?.mul(&inner));
            }
            out.insert(rest, acc);
        }
        Ok(out)
    }

    /// Residue of `K_i · F` for every spectator monomial of `F`, written into `out`.
    fn residues(&self, chart: u32, integrand: Tensor, out: &mut BTreeMap<Key, Cyclotomic>) -> Result<()> {
        for (key, f) in integrand {
            if f.is_zero() {
                if f.precision() < 1 {
                    return Err(Error::PrecisionExhausted { requested: 0, precision: f.precision() });
                }
                continue;
            }
            let vf = -f.low();
            for k in 1..=(vf + 1).max(0) as usize {
                let kap = self.kernel.get(k - 1).ok_or(Error::PrecisionExhausted {
                    requested: k as i64,
                    precision: self.kernel.len() as i64,
                })?;
                let mut res = Cyclotomic::zero_of(&self.field);
                let mut e = kap.low();
                while -1 - e >= f.low() {
                    let a = kap.try_coeff(e)?;
                    if !a.vanishes() {
                        res = res.plus(&a.times(&f.try_coeff(-1 - e)?));
                    }
                    e += 1;
                }
                if res.vanishes() {
                    continue;
                }
                let res = res.times(&self.zeta(chart as i64 * (k as i64 - self.s as i64)));
                let mut full = vec![(chart, k as u32 + 1)];
                full.extend_from_slice(&key);
                let slot = out.entry(full).or_insert_with(|| Cyclotomic::zero_of(&self.field));
                *slot = slot.plus(&res);
            }
        }
        Ok(())
    }
}

/// The recursion on the curve of a [`SpectralCurveConfig`], memoizing every
/// computed `W_{g,n}`.
pub struct SpectralRecursion {
    config: SpectralCurveConfig,
    memo: DashMap<(u32, usize), Arc<Correlator>>,
    expansions: DashMap<(u32, u32, u64), Cyclotomic>,
}

impl SpectralRecursion {
    pub fn new(config: SpectralCurveConfig) -> Self {
        SpectralRecursion { config, memo: DashMap::new(), expansions: DashMap::new() }
    }

    pub fn config(&self) -> &SpectralCurveConfig {
        &self.config
    }

    /// `W_{g,n}` for `2g - 2 + n > 0`.
    pub fn correlator(&self, g: u32, n: usize) -> Result<Arc<Correlator>> {
        if 2 * g as i64 - 2 + n as i64 <= 0 || n == 0 {
            return Err(Error::Unstable { g, n });
        }
        if let Some(c) = self.memo.get(&(g, n)) {
            return Ok(c.clone());
        }
        // Dependencies first, so that retries at higher order redo only this level.
        for (g1, n1) in dependencies(g, n) {
            self.correlator(g1, n1)?;
        }
        let bound = (6 * g as usize + 2 * n).saturating_sub(4);
        let mut order = self.config.order.max(2 * bound + 6);
        let result = loop {
            match self.compute(g, n, order) {
                Err(Error::PrecisionExhausted { .. }) if order < 400 => order *= 2,
                other => break other?,
            }
        };
        let result = Arc::new(result);
        self.memo.insert((g, n), result.clone());
        Ok(result)
    }

    fn stable(&self, g: u32, n: usize) -> Option<Arc<Correlator>> {
        if 2 * g as i64 - 2 + n as i64 > 0 {
            self.memo.get(&(g, n)).map(|c| c.clone())
        } else {
            None
        }
    }

    fn compute(&self, g: u32, n_total: usize, order: usize) -> Result<Correlator> {
        let r = self.config.r;
        let s = self.config.effective_s();
        let ws = Workspace::new(r, s, order)?;
        let n = n_total - 1; // spectators
        let parts: Vec<BTreeMap<Key, Cyclotomic>> = (0..r)
            .into_par_iter()
            .map(|chart| {
                let mut out = BTreeMap::new();
                let integrand = self.integrand(&ws, chart, g, n)?;
                ws.residues(chart, integrand, &mut out)?;
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut terms: BTreeMap<Key, Cyclotomic> = BTreeMap::new();
        for part in parts {
            for (k, v) in part {
                let slot = terms.entry(k).or_insert_with(|| Cyclotomic::zero_of(&ws.field));
                *slot = slot.plus(&v);
            }
        }
        terms.retain(|_, v| !v.vanishes());
        Ok(Correlator { g, n: n_total, r, s, terms })
    }

    /// `W_{g-1,n+2}(u(w), u(-w), J) + Σ' W(u(w), I) W(u(-w), J∖I)` per `dw²`.
    fn integrand(&self, ws: &Workspace, chart: u32, g: u32, n: usize) -> Result<Tensor> {
        let mut total = Tensor::new();
        if g >= 1 {
            if g == 1 && n == 0 {
                total.insert(Vec::new(), ws.b_diag.clone());
            } else {
                let w = self.stable(g - 1, n + 2).expect("dependency computed");
                for (k, v) in ws.pull_pair(&w, chart)? {
                    accumulate(&mut total, k, v);
                }
            }
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0u32..(1 << n) {
                let left: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
                let right: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 0).collect();
                if (g1 == 0 && left.is_empty()) || (g2 == 0 && right.is_empty()) {
                    continue;
                }
                let is_b = |gg: u32, side: &[usize]| gg == 0 && side.len() == 1;
                let (t1, t2) = match (is_b(g1, &left), is_b(g2, &right)) {
                    (true, true) => (ws.b_term(chart, 0, false), ws.b_term(chart, 0, true)),
                    (true, false) => {
                        let t2 = ws.pull_first(&self.stable(g2, right.len() + 1).expect("computed"), chart, true)?;
                        (ws.b_term(chart, pole_depth(&t2), false), t2)
                    }
                    (false, true) => {
                        let t1 = ws.pull_first(&self.stable(g1, left.len() + 1).expect("computed"), chart, false)?;
                        let d = pole_depth(&t1);
                        (t1, ws.b_term(chart, d, true))
                    }
                    (false, false) => (
                        ws.pull_first(&self.stable(g1, left.len() + 1).expect("computed"), chart, false)?,
                        ws.pull_first(&self.stable(g2, right.len() + 1).expect("computed"), chart, true)?,
                    ),
                };
                for (k1, s1) in &t1 {
                    for (k2, s2) in &t2 {
                        let mut key = vec![(0, 0); n];
                        for (p, &j) in left.iter().enumerate() {
                            key[j] = k1[p];
                        }
                        for (p, &j) in right.iter().enumerate() {
                            key[j] = k2[p];
                        }
                        accumulate(&mut total, key, s1.mul(s2));
                    }
                }
            }
        }
        Ok(total)
    }

    /// `[q^{μ-1}] φ_{i,k}(u(q)) u'(q) / μ`, with `u(q)` inverting `q = u e^{-u^r/r}`.
    fn expansion(&self, i: u32, k: u32, mu: u64) -> Result<Cyclotomic> {
        if let Some(v) = self.expansions.get(&(i, k, mu)) {
            return Ok(v.clone());
        }
        let f = CyclotomicField::new(self.config.r as usize);
        let order = self.config.mu_max.max(mu) as usize;
        let u = lift(&f, &q_inverse(self.config.r, order)?);
        let base = u.sub(&Series::constant(Cyclotomic::zeta_pow(&f, i as i64)));
        let s = base.inv()?.pow(k).mul(&u.derivative());
        let v = s.try_coeff(mu as i64 - 1)?.scaled(&rat(1, mu as i64));
        self.expansions.insert((i, k, mu), v.clone());
        Ok(v)
    }

    /// The coefficient of `∏ d(e^{μ_j x_j})` in `W_{g,n}` for the curve
    /// `x = -z^r + log z`, `y = z^s`.
    pub fn expansion_coefficient(&self, g: u32, mu: &[u64]) -> Result<Rational> {
        let w = self.correlator(g, mu.len())?;
        expansion_coefficients(self, &w, mu)
    }
}

/// Largest pole order in `w` among the series of a tensor.
fn pole_depth(t: &Tensor) -> usize {
    t.values().map(|s| (-s.low()).max(0) as usize).max().unwrap_or(0)
}

fn dependencies(g: u32, n: usize) -> Vec<(u32, usize)> {
    let mut out = Vec::new();
    if g >= 1 && 2 * (g as i64 - 1) - 2 + n as i64 + 1 > 0 {
        out.push((g - 1, n + 1));
    }
    for g1 in 0..=g {
        for m in 0..n {
            // W_{g1, m+1} with m ≤ n - 1 spectators
            if 2 * g1 as i64 - 2 + m as i64 + 1 > 0 && (g1, m + 1) != (g, n) {
                out.push((g1, m + 1));
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Extracts the coefficient of `∏ d(e^{μ_j x_j})` from `W` and converts from
/// the rescaled coordinate: multiplies by `r^{(s(2g-2+n) + Σμ)/r}`.
pub fn expansion_coefficients(rec: &SpectralRecursion, w: &Correlator, mu: &[u64]) -> Result<Rational> {
    if mu.len() != w.n {
        return Err(Error::SizeMismatch(mu.len(), w.n));
    }
    if let Some(&m) = mu.iter().find(|&&m| m > rec.config.mu_max) {
        return Err(Error::Invalid(format!("μ = {m} exceeds the configured maximum {}", rec.config.mu_max)));
    }
    let f = CyclotomicField::new(w.r as usize);
    let mut total = Cyclotomic::zero_of(&f);
    for (key, c) in &w.terms {
        let mut p = c.clone();
        for (&(i, k), &m) in key.iter().zip(mu) {
            p = p.times(&rec.expansion(i, k, m)?);
            if p.vanishes() {
                break;
            }
        }
        total = total.plus(&p);
    }
    let r = w.r as i64;
    let chi = 2 * w.g as i64 - 2 + w.n as i64;
    let exponent = w.s as i64 * chi + mu.iter().map(|&m| m as i64).sum::<i64>();
    if exponent % r != 0 {
        if total.vanishes() {
            return Ok(Rational::zero());
        }
        return Err(Error::not_rational(format!("{total} · r^({exponent}/{r})")));
    }
    let scale = Rational::from_integer(r.into()).pow((exponent / r) as i32);
    Ok(rational_part(&total)? * scale)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn rec(r: u32, s: u32) -> SpectralRecursion {
        SpectralRecursion::new(SpectralCurveConfig::new(r, s).unwrap())
    }

    #[test]
    fn anchor_coefficients() {
        assert_eq!(rec(1, 1).expansion_coefficient(0, &[1, 1, 1]).unwrap(), int(1));
        let two = rec(2, 2);
        assert_eq!(two.expansion_coefficient(0, &[1, 1, 2]).unwrap(), int(4));
        assert_eq!(two.expansion_coefficient(0, &[1, 1, 1]).unwrap(), int(0));
        assert_eq!(two.expansion_coefficient(0, &[2, 2, 2]).unwrap(), int(8));
        // ∫_{M̄_{1,1}} λ_1 route: h_{1;(2)}/3! = 1/12
        assert_eq!(rec(1, 1).expansion_coefficient(1, &[2]).unwrap(), rat(1, 12));
    }

    #[test]
    fn unstable_requests_fail() {
        let r = rec(2, 2);
        assert!(matches!(r.correlator(0, 2), Err(Error::Unstable { .. })));
        assert!(matches!(r.correlator(0, 1), Err(Error::Unstable { .. })));
        assert!(r.expansion_coefficient(0, &[1, 1, 40]).is_err());
    }

    #[test]
    fn symmetric_and_rotation_covariant() {
        for (r, s) in [(1, 1), (2, 2), (2, 1), (3, 3), (3, 4)] {
            let rr = rec(r, s);
            for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2)] {
                let w = rr.correlator(g, n).unwrap();
                assert!(w.is_symmetric(), "r={r} s={s} ({g},{n})");
                assert!(w.is_rotation_covariant(), "r={r} s={s} ({g},{n})");
            }
        }
    }

    #[test]
    fn poles_only_at_branch_points() {
        // φ_{i,k} with k ≥ 2 is regular at 0 and decays like u^{-2} at ∞
        let w = rec(3, 2).correlator(1, 2).unwrap();
        assert!(w.terms().keys().all(|k| k.iter().all(|&(_, p)| p >= 2)));
        let f = CyclotomicField::new(3);
        let half = Cyclotomic::from_rational_in(&f, rat(1, 2));
        let h = w.univariate(0, &[half]).unwrap();
        assert!(h.denominator().degree().unwrap() >= h.numerator().degree().unwrap_or(0) + 2);
        assert!(!h.denominator().eval(&Cyclotomic::zero_of(&f)).vanishes());
    }

    #[test]
    fn w03_for_r_one_is_a_single_term() {
        // one branch point, and W_{0,3} only sees its double pole
        let w = rec(1, 1).correlator(0, 3).unwrap();
        assert_eq!(w.terms().len(), 1);
        assert_eq!(w.max_pole_order(), 2);
    }

    #[test]
    fn evaluation_matches_univariate() {
        let w = rec(2, 1).correlator(0, 3).unwrap();
        let f = CyclotomicField::new(2);
        let pts: Vec<Cyclotomic> = [3, 5, 7].iter().map(|&k| Cyclotomic::from_rational_in(&f, rat(1, k))).collect();
        let h = w.univariate(1, &[pts[0].clone(), pts[2].clone()]).unwrap();
        assert_eq!(h.eval(&pts[1]).unwrap(), w.evaluate(&pts).unwrap());
    }
}
