use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::formulas::{closed_form_rhs, elsv_rhs, jpt_rhs, rescaling_check};
use crate::arith::{factorial, Rational};
use crate::error::Result;
use crate::hurwitz::{enumerate_oracle, orbifold_hurwitz, HurwitzQuery, DEFAULT_CEILING};
use crate::recursion::{SpectralCurveConfig, SpectralRecursion};

/// Which values of `s` to pair with each `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SChoice {
    EqualR,
    /// `lo..=hi`, independent of `r`.
    Range(u32, u32),
    /// `1..=r + k`.
    UpToRPlus(u32),
}

/// A finite family of instances `(r, s, g, μ)` with `μ` weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub r_values: Vec<u32>,
    pub s: SChoice,
    pub g_max: u32,
    pub n_max: usize,
    pub mu_sum_max: u64,
    /// Keep only `μ` with `r | Σμ`.
    pub divisible_only: bool,
}

impl Grid {
    /// The Hurwitz regime `s = r`, where every path is available.
    pub fn hurwitz(r_max: u32, g_max: u32, n_max: usize, mu_sum_max: u64) -> Self {
        Grid { r_values: (1..=r_max).collect(), s: SChoice::EqualR, g_max, n_max, mu_sum_max, divisible_only: true }
    }

    /// `s ∈ 1..=r+2` for the given `r`, comparing the recursion with the closed form only.
    pub fn general(r_values: Vec<u32>, g_max: u32, n_max: usize, mu_sum_max: u64) -> Self {
        Grid { r_values, s: SChoice::UpToRPlus(2), g_max, n_max, mu_sum_max, divisible_only: false }
    }

    fn s_values(&self, r: u32) -> Vec<u32> {
        match self.s {
            SChoice::EqualR => vec![r],
            SChoice::Range(lo, hi) => (lo.max(1)..=hi).collect(),
            SChoice::UpToRPlus(k) => (1..=r + k).collect(),
        }
    }

    pub fn instances(&self) -> Vec<Instance> {
        let mut out = BTreeSet::new();
        for &r in &self.r_values {
            for s in self.s_values(r) {
                for g in 0..=self.g_max {
                    for n in 1..=self.n_max {
                        if 2 * g as i64 - 2 + n as i64 <= 0 {
                            continue;
                        }
                        for mu in bounded_partitions(n, self.mu_sum_max) {
                            let d: u64 = mu.iter().sum();
                            if self.divisible_only && d % r as u64 != 0 {
                                continue;
                            }
                            out.insert(Instance { r, s, g, mu });
                        }
                    }
                }
            }
        }
        out.into_iter().collect()
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.s {
            SChoice::EqualR => "s=r".to_string(),
            SChoice::Range(lo, hi) => format!("s={lo}..={hi}"),
            SChoice::UpToRPlus(k) => format!("s=1..=r+{k}"),
        };
        write!(
            f,
            "r∈{:?} {s} g≤{} n≤{} Σμ≤{}{}",
            self.r_values,
            self.g_max,
            self.n_max,
            self.mu_sum_max,
            if self.divisible_only { " r|Σμ" } else { "" }
        )
    }
}

/// Weakly decreasing `n`-tuples of positive integers with sum at most `max`.
fn bounded_partitions(n: usize, max: u64) -> Vec<Vec<u64>> {
    fn rec(left: usize, cap: u64, budget: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for m in 1..=cap.min(budget.saturating_sub(left as u64 - 1)) {
            cur.push(m);
            rec(left - 1, m, budget - m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max, max, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Instance {
    pub r: u32,
    pub s: u32,
    pub g: u32,
    pub mu: Vec<u64>,
}

impl Instance {
    pub fn key(&self) -> String {
        let mu: Vec<String> = self.mu.iter().map(u64::to_string).collect();
        format!("r={} s={} g={} mu={}", self.r, self.s, self.g, mu.join(","))
    }
}

/// One value per path, as `p/q` or an error message.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub query: Instance,
    pub values: BTreeMap<String, String>,
    pub errors: BTreeMap<String, String>,
    /// Side identities that are not values of the same number (the rescaling pair).
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub grid: String,
    pub instances: Vec<InstanceRecord>,
    pub all_pass: bool,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
}

impl CrossCheckReport {
    pub fn failures(&self) -> impl Iterator<Item = &InstanceRecord> {
        self.instances.iter().filter(|r| !r.pass)
    }
}

/// Paths compared on an instance, in report order.
pub const PATHS: [&str; 6] = ["recursion", "closed_form", "jpt", "characters", "enumeration", "elsv"];

fn evaluate(inst: &Instance, rec: &SpectralRecursion) -> InstanceRecord {
    let start = Instant::now();
    let Instance { r, s, g, ref mu } = *inst;
    let mut got: BTreeMap<String, Result<Rational>> = BTreeMap::new();
    let mut checks = BTreeMap::new();
    got.insert("recursion".into(), rec.expansion_coefficient(g, mu));
    got.insert("closed_form".into(), closed_form_rhs(r, s, g, mu));
    let d: u64 = mu.iter().sum();
    if s == r && d % r as u64 == 0 {
        got.insert("jpt".into(), jpt_rhs(r, g, mu));
        checks.insert("rescaling".to_string(), rescaling_check(r, g, mu).is_ok_and(|(a, b)| a == b));
        match HurwitzQuery::new(g, r, mu.clone()) {
            Ok(q) => {
                let b = Rational::from_integer(factorial(q.branch_points() as u64));
                got.insert("characters".into(), orbifold_hurwitz(&q).map(|h| h / &b));
                if d <= DEFAULT_CEILING {
                    got.insert("enumeration".into(), enumerate_oracle(&q).map(|h| h / &b));
                }
            }
            Err(e) => {
                got.insert("characters".into(), Err(e));
            }
        }
        if r == 1 {
            got.insert("elsv".into(), elsv_rhs(g, mu));
        }
    }
    let mut values = BTreeMap::new();
    let mut errors = BTreeMap::new();
    for (k, v) in got {
        match v {
            Ok(x) => {
                values.insert(k, x.to_string());
            }
            Err(e) => {
                errors.insert(k, e.to_string());
            }
        }
    }
    let distinct: BTreeSet<&String> = values.values().collect();
    let pass = errors.is_empty() && distinct.len() == 1 && checks.values().all(|&c| c);
    InstanceRecord { query: inst.clone(), values, errors, checks, pass, elapsed_ms: start.elapsed().as_secs_f64() * 1e3 }
}

/// Runs every available path on every instance of the grid. Failures are
/// recorded in the report, never returned as errors.
pub fn cross_check(grid: &Grid) -> CrossCheckReport {
    cross_check_with_order(grid, None)
}

/// As [`cross_check`], with an explicit starting truncation order for the recursion.
pub fn cross_check_with_order(grid: &Grid, order: Option<usize>) -> CrossCheckReport {
    let start = Instant::now();
    let instances = grid.instances();
    let curves: BTreeSet<(u32, u32)> = instances.iter().map(|i| (i.r, i.s)).collect();
    let mu_max = instances.iter().flat_map(|i| i.mu.iter().copied()).max().unwrap_or(1);
    let engines: BTreeMap<(u32, u32), SpectralRecursion> = curves
        .into_iter()
        .filter_map(|(r, s)| {
            let mut cfg = SpectralCurveConfig::new(r, s).ok()?.with_mu_max(mu_max);
            if let Some(o) = order {
                cfg = cfg.with_order(o);
            }
            Some(((r, s), SpectralRecursion::new(cfg)))
        })
        .collect();
    // Warm every needed correlator once per curve, so instances do not race on them.
    let needed: BTreeSet<(u32, u32, u32, usize)> = instances.iter().map(|i| (i.r, i.s, i.g, i.mu.len())).collect();
    let by_curve: Vec<((u32, u32), Vec<(u32, usize)>)> = engines
        .keys()
        .map(|&c| (c, needed.iter().filter(|k| (k.0, k.1) == c).map(|k| (k.2, k.3)).collect()))
        .collect();
    by_curve.par_iter().for_each(|(c, list)| {
        for &(g, n) in list {
            // errors resurface per instance
            let _ = engines[c].correlator(g, n);
        }
    });
    let mut records: Vec<InstanceRecord> =
        instances.par_iter().map(|inst| evaluate(inst, &engines[&(inst.r, inst.s)])).collect();
    records.sort_by(|a, b| a.query.cmp(&b.query));
    let mut notes = Vec::new();
    if records.iter().any(|r| r.query.s != r.query.r) {
        notes.push(
            "instances with s ≠ r have no Hurwitz-type enumerative counterpart; only recursion and closed_form are compared"
                .to_string(),
        );
    }
    if records.iter().any(|r| r.query.mu.iter().sum::<u64>() > DEFAULT_CEILING && r.query.s == r.query.r) {
        notes.push(format!("enumeration skipped above degree {DEFAULT_CEILING}"));
    }
    CrossCheckReport {
        grid: grid.to_string(),
        all_pass: records.iter().all(|r| r.pass),
        instances: records,
        notes,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}
