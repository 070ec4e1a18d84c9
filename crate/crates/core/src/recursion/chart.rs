use std::sync::Arc;

use dashmap::DashMap;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::arith::{int, rat, Cyclotomic, CyclotomicField, Field, Rational};
use crate::error::{Error, Result};
use crate::series::{lagrange_invert_with, RationalFunction, Series};

/// The curve `x̃ = -u^r/r + log u`, `ỹ = u^s` with `B = du du'/(u - u')²`.
///
/// `s = 0` is evaluated as `s = r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectralCurveConfig {
    pub r: u32,
    /// The requested `s`.
    pub s: u32,
    /// Base truncation order of local expansions; raised automatically when short.
    pub order: usize,
    /// Largest `μ_j` for coefficient extraction.
    pub mu_max: u64,
}

impl SpectralCurveConfig {
    pub fn new(r: u32, s: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::Invalid("r must be at least 1".into()));
        }
        Ok(SpectralCurveConfig { r, s, order: 12, mu_max: 8 })
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_mu_max(mut self, mu_max: u64) -> Self {
        self.mu_max = mu_max;
        self
    }

    /// The exponent actually used for `ỹ = u^s`.
    pub fn effective_s(&self) -> u32 {
        if self.s == 0 {
            self.r
        } else {
            self.s
        }
    }

    pub fn field(&self) -> Arc<CyclotomicField> {
        CyclotomicField::new(self.r as usize)
    }
}

pub(crate) fn lift(field: &Arc<CyclotomicField>, s: &Series<Rational>) -> Series<Cyclotomic> {
    s.map(field, |q| Cyclotomic::from_rational_in(field, q.clone()))
}

/// `w(t)` with `w² = 2((1+t)^r - 1) - 2r log(1+t)` and `w = r t + O(t²)`.
fn w_of_t(r: u32, order: usize) -> Result<Series<Rational>> {
    let prec = order as i64 + 3;
    let t = Series::var(&()).truncate(prec);
    let one_plus = Series::one(&()).add(&t);
    let g = one_plus
        .pow(r)
        .sub(&Series::one(&()))
        .scale_rational(&int(2))
        .sub(&one_plus.log()?.scale_rational(&int(2 * r as i64)));
    // g / (r t)² = 1 + O(t)
    let h = g.shift(-2).scale_rational(&rat(1, (r * r) as i64));
    Ok(h.pow_rational(&rat(1, 2))?.shift(1).scale_rational(&int(r as i64)).truncate(order as i64 + 2))
}

/// Local coordinate at the branch point `u = ζ^i`: `u = ζ^i (1 + t(w))` with
/// `x̃(u) = x̃(ζ^i) - w²/(2r)`, so the deck involution is `w ↦ -w`.
#[derive(Clone, Debug)]
pub struct LocalChart {
    pub r: u32,
    pub i: u32,
    /// `t(w) = w/r + O(w²)`, rational and the same at every branch point.
    pub t: Series<Rational>,
    /// `w(t)`, the inverse of `t`.
    pub w: Series<Rational>,
    /// `σ_t(t) = t(-w(t))`.
    pub sigma_t: Series<Rational>,
}

impl LocalChart {
    /// `u(w) = ζ^i (1 + t(w))`.
    pub fn u_of_w(&self) -> Series<Cyclotomic> {
        let f = CyclotomicField::new(self.r as usize);
        let z = Cyclotomic::zeta_pow(&f, self.i as i64);
        lift(&f, &Series::one(&()).add(&self.t)).scale(&z)
    }

    /// The involution `σ(u) = u(-w(u))` as a series in `v = u - ζ^i`.
    pub fn sigma_u(&self) -> Result<Series<Cyclotomic>> {
        let f = CyclotomicField::new(self.r as usize);
        let z = Cyclotomic::zeta_pow(&f, self.i as i64);
        let zinv = Cyclotomic::zeta_pow(&f, -(self.i as i64));
        // σ(u) = ζ^i (1 + σ_t(v/ζ^i))
        let v_over = Series::monomial(zinv, 1);
        let inner = lift(&f, &self.sigma_t).compose(&v_over)?;
        Ok(Series::one(&f).add(&inner).scale(&z))
    }
}

/// The local chart at `u = ζ^i` with `t(w)` known to `O(w^{order+1})`.
pub fn local_chart(r: u32, i: u32, order: usize) -> Result<LocalChart> {
    if order < 2 {
        return Err(Error::Invalid("local charts need order ≥ 2".into()));
    }
    if r == 0 || i >= r {
        return Err(Error::Invalid(format!("branch index {i} outside 0..{r}")));
    }
    let key = (r, order);
    let (t, w, sigma_t) = match CHARTS.get(&key) {
        Some(c) => c.clone(),
        None => {
            let w = w_of_t(r, order)?;
            let t = w.reversion()?;
            let sigma_t = t.compose(&w.neg())?;
            CHARTS.insert(key, (t.clone(), w.clone(), sigma_t.clone()));
            (t, w, sigma_t)
        }
    };
    Ok(LocalChart { r, i, t, w, sigma_t })
}

type RationalChart = (Series<Rational>, Series<Rational>, Series<Rational>);

/// `(t, w, σ_t)` per `(r, order)`; they do not depend on the branch index.
static CHARTS: Lazy<DashMap<(u32, usize), RationalChart>> = Lazy::new(DashMap::new);

/// The kernel at branch `i`: `K_i(u_0, w) = Σ_{k≥1} φ_{i,k+1}(u_0) κ_k(w)`
/// with `φ_{i,k}(u) = (u - ζ^i)^{-k}` and
/// `κ_k = ζ^{i(k-s)} (t(w)^k - t(-w)^k) / (2((1+t(w))^s - (1+t(-w))^s) · (-w/r))`.
#[derive(Clone, Debug)]
pub struct Kernel {
    pub r: u32,
    pub s: u32,
    pub i: u32,
    /// `κ̂_k` (without the root-of-unity factor) for `k = 1..=len`.
    pub(crate) hat: Vec<Series<Rational>>,
}

impl Kernel {
    pub(crate) fn rational_parts(chart: &LocalChart, s: u32, kmax: usize) -> Result<Vec<Series<Rational>>> {
        let r = chart.r;
        if s == 0 {
            return Err(Error::Invalid("ỹ(w) - ỹ(-w) vanishes identically for s = 0".into()));
        }
        let t = &chart.t;
        let tm = t.reflect();
        let one = Series::one(&());
        let ydiff = one.add(t).pow(s).sub(&one.add(&tm).pow(s));
        // 2 (ỹ(w) - ỹ(-w)) · (-w/r), without ζ^{is}
        let den = ydiff.shift(1).scale_rational(&rat(-2, r as i64));
        let den_inv = den.inv()?;
        let mut out = Vec::with_capacity(kmax);
        let (mut tk, mut tmk) = (one.clone(), one.clone());
        for _ in 1..=kmax {
            tk = tk.mul(t);
            tmk = tmk.mul(&tm);
            out.push(tk.sub(&tmk).mul(&den_inv));
        }
        Ok(out)
    }

    /// `κ_k(w)` with its root-of-unity factor.
    pub fn kappa(&self, k: usize) -> Series<Cyclotomic> {
        let f = CyclotomicField::new(self.r as usize);
        let z = Cyclotomic::zeta_pow(&f, self.i as i64 * (k as i64 - self.s as i64));
        lift(&f, &self.hat[k - 1]).scale(&z)
    }

    /// The kernel as a Laurent series in `w` whose coefficients are rational
    /// functions of `u_0`, up to `w^{prec-1}`.
    pub fn as_series(&self, prec: i64) -> Result<Series<RationalFunction<Cyclotomic>>> {
        let f = CyclotomicField::new(self.r as usize);
        let zi = Cyclotomic::zeta_pow(&f, self.i as i64);
        let low = -1i64;
        let mut coeffs = Vec::new();
        for e in low..prec {
            let mut c = RationalFunction::zero_of(&f);
            for k in 1..=self.hat.len() {
                let kap = self.kappa(k);
                if e >= kap.precision() {
                    return Err(Error::PrecisionExhausted { requested: e, precision: kap.precision() });
                }
                let a = kap.coeff(e);
                if !a.vanishes() {
                    let pole = RationalFunction::pole(&zi, k as u32 + 1);
                    c = c.plus(&pole.times(&RationalFunction::from_poly(crate::series::Poly::constant(a))));
                }
            }
            coeffs.push(c);
        }
        Ok(Series::new(&f, low, coeffs, prec))
    }
}

/// The kernel at branch `i` with terms `k = 1..=kmax`.
pub fn recursion_kernel(config: &SpectralCurveConfig, i: u32, kmax: usize) -> Result<Kernel> {
    let chart = local_chart(config.r, i, config.order.max(kmax + 4))?;
    let s = config.effective_s();
    Ok(Kernel { r: config.r, s, i, hat: Kernel::rational_parts(&chart, s, kmax)? })
}

/// `u(q)` solving `q = u e^{-u^r/r}`, to `O(q^{order+1})`.
pub fn q_inverse(r: u32, order: usize) -> Result<Series<Rational>> {
    let phi = Series::monomial(rat(1, r as i64), r as i64).truncate(order as i64 + 1).exp()?;
    lagrange_invert_with(&phi, order)
}
