//! Command-line front end. [`run`] parses an argument vector, computes, and
//! returns the exit status together with the emitted document, so the binary
//! is a thin wrapper and tests can drive it in-process.

mod doc;

use std::path::PathBuf;
use std::time::Instant;

use chiodo_core::arith::{bernoulli_polynomial, factorial, parse_rational, Rational};
use chiodo_core::cohft::{chiodo_elsv_integral, chiodo_integral_with, ChiodoSpec, UnitMode};
use chiodo_core::harness::{closed_form_rhs, cross_check_with_order, jpt_rhs, CrossCheckReport, Grid, SChoice, PATHS};
use chiodo_core::hurwitz::{enumerate_oracle, orbifold_hurwitz, CharacterTable, HurwitzQuery, DEFAULT_CEILING};
use chiodo_core::moduli::{kappa_psi_integral, witten_correlator, IntersectionCache, PsiKappaQuery};
use chiodo_core::recursion::{condition_y_defect, series_identity_check, IdentityKind, SpectralCurveConfig, SpectralRecursion};
use chiodo_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use doc::{Doc, Format};

/// Exit status and emitted text of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "chiodo", version, about = "Exact Chiodo-class intersections, topological recursion and orbifold Hurwitz numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Persistent intersection-number cache (default: $CHIODO_CACHE, then ~/.cache/chiodo/intersections.tsv).
    #[arg(long, global = true, env = "CHIODO_CACHE")]
    cache: Option<PathBuf>,
    /// Do not read or write the persistent cache (overrides --cache).
    #[arg(long, global = true)]
    no_cache: bool,
    /// Starting truncation order for series computations.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Suppress diagnostics on stderr.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bernoulli polynomial B_m(x).
    Bernoulli {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value = "0")]
        x: String,
    },
    /// Intersection numbers on the moduli space of curves.
    Intersect {
        #[command(subcommand)]
        which: Intersect,
    },
    /// Orbifold Hurwitz number h_{g;μ} with labelled poles.
    Hurwitz {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u64>,
        /// Also run the brute-force enumeration (degree ≤ 6) and require agreement.
        #[arg(long)]
        enumerate: bool,
    },
    /// Expansion coefficient of W_{g,n} for x = -z^r + log z, y = z^s.
    Recursion {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u64>,
        /// Include the partial-fraction terms of W_{g,n}.
        #[arg(long)]
        terms: bool,
    },
    /// Run a verification suite; exit 1 if anything fails.
    Verify(VerifyArgs),
    /// One row per weakly decreasing μ with n parts.
    Table {
        #[arg(long, value_enum)]
        kind: TableKind,
        #[arg(long)]
        r: u32,
        /// Defaults to r.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        mu_sum_max: u64,
    },
}

#[derive(Subcommand, Debug)]
enum Intersect {
    /// ⟨τ_{d_1} ⋯ τ_{d_n}⟩_g.
    Psi {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
    },
    /// ∫ ψ^d κ_{b_1} ⋯ κ_{b_m}.
    Kappa {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        kappa: Vec<u32>,
    },
    /// ∫ C_{g,n}(r,s;a) ∏ ψ_i^{d_i}.
    Chiodo {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        d: Vec<u32>,
        #[arg(long, value_enum, default_value_t = Unit::Kappa)]
        unit: Unit,
    },
    /// ∫ C_{g,n}(r,s; r - r⟨μ/r⟩) / ∏(1 - (μ_i/r)ψ_i).
    Elsv {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        mu: Vec<u64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Unit {
    Kappa,
    Dilaton,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TableKind {
    Hurwitz,
    ClosedForm,
    Jpt,
    Recursion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    /// s = r: recursion, closed form, JPT and both Hurwitz oracles.
    Cross,
    /// s = 1..=r+2: recursion against the closed form.
    General,
    /// Local series identities of the spectral curve.
    Identities,
    /// Character formula against enumeration, and character orthogonality.
    Oracles,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 2)]
    r_max: u32,
    #[arg(long, default_value_t = 1)]
    g_max: u32,
    #[arg(long, default_value_t = 3)]
    n_max: usize,
    #[arg(long, default_value_t = 6)]
    mu_sum_max: u64,
}

/// Status for a core error: input problems are usage errors.
fn status_of(e: &Error) -> i32 {
    match e {
        Error::Unstable { .. }
        | Error::NotDivisible { .. }
        | Error::AboveCeiling { .. }
        | Error::Invalid(_)
        | Error::SizeMismatch(..) => EXIT_USAGE,
        _ => EXIT_COMPUTATION,
    }
}

fn failure(status: i32, msg: String) -> Outcome {
    Outcome { status, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

fn default_cache() -> Option<PathBuf> {
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache/chiodo/intersections.tsv"))
}

/// Parses `argv` (including the program name), computes and renders.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { status: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let cache_path = if cli.no_cache { None } else { cli.cache.clone().or_else(default_cache) };
    let global = IntersectionCache::global();
    let mut on_disk = 0;
    if let Some(p) = &cache_path {
        match IntersectionCache::load(p) {
            Ok(c) => {
                on_disk = c.len();
                global.absorb(c);
            }
            Err(e) => return failure(EXIT_COMPUTATION, format!("reading cache {}: {e}", p.display())),
        }
    }
    let mut stderr = String::new();
    let result = dispatch(&cli, &mut stderr);
    if let Some(p) = &cache_path {
        if global.len() > on_disk {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                let _ = std::fs::create_dir_all(dir);
            }
            if let Err(e) = global.save(p) {
                stderr.push_str(&format!("warning: could not write cache {}: {e}\n", p.display()));
            }
        }
    }
    if cli.quiet {
        stderr.clear();
    }
    match result {
        Ok((doc, status)) => match doc.render(cli.format) {
            Ok(stdout) => Outcome { status, stdout, stderr },
            Err(e) => failure(EXIT_COMPUTATION, e),
        },
        Err(e) => {
            let mut out = failure(status_of(&e), e.to_string());
            out.stderr = stderr + &out.stderr;
            out
        }
    }
}

fn list<T: ToString>(v: &[T]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect())
}

fn q(v: &Rational) -> Value {
    Value::String(v.to_string())
}

fn dispatch(cli: &Cli, log: &mut String) -> chiodo_core::Result<(Doc, i32)> {
    let single = |query: Value, value: Rational| Ok((Doc::single(query, "value", q(&value)), EXIT_OK));
    match &cli.command {
        Command::Bernoulli { m, x } => {
            let xq = parse_rational(x).map_err(|e| Error::Invalid(format!("--x {x}: {e}")))?;
            single(json!({"m": m, "x": xq.to_string()}), bernoulli_polynomial(*m, &xq))
        }
        Command::Intersect { which } => match which {
            Intersect::Psi { g, d } => single(json!({"g": g, "d": list(d)}), witten_correlator(*g, d)?),
            Intersect::Kappa { g, d, kappa } => {
                let query = PsiKappaQuery::new(*g, d.clone(), kappa.clone())?;
                single(json!({"g": g, "d": list(d), "kappa": list(kappa)}), kappa_psi_integral(&query)?)
            }
            Intersect::Chiodo { r, s, g, a, d, unit } => {
                if a.len() != d.len() {
                    return Err(Error::SizeMismatch(a.len(), d.len()));
                }
                let spec = ChiodoSpec::new(*r, *s, *g, a.clone())?;
                let mode = match unit {
                    Unit::Kappa => UnitMode::KappaDecoration,
                    Unit::Dilaton => UnitMode::DilatonLeaves,
                };
                let v = chiodo_integral_with(&spec, d, mode)?;
                single(json!({"r": r, "s": s, "g": g, "a": list(a), "d": list(d)}), v)
            }
            Intersect::Elsv { r, s, g, mu } => {
                single(json!({"r": r, "s": s, "g": g, "mu": list(mu)}), chiodo_elsv_integral(*r, *s, *g, mu)?)
            }
        },
        Command::Hurwitz { r, g, mu, enumerate } => {
            let query = HurwitzQuery::new(*g, *r, mu.clone())?;
            let h = orbifold_hurwitz(&query)?;
            let b = query.branch_points();
            let mut values = Map::new();
            values.insert("h".into(), q(&h));
            values.insert("b".into(), json!(b));
            values.insert("h_over_b_factorial".into(), q(&(&h / Rational::from_integer(factorial(b as u64)))));
            if *enumerate {
                let e = enumerate_oracle(&query)?;
                if e != h {
                    return Err(Error::Invalid(format!("enumeration gives {e}, characters give {h}")));
                }
                values.insert("h_enumerated".into(), q(&e));
            }
            Ok((Doc::fields(json!({"r": r, "g": g, "mu": list(mu)}), values), EXIT_OK))
        }
        Command::Recursion { r, s, g, mu, terms } => {
            let mut config = SpectralCurveConfig::new(*r, *s)?.with_mu_max(mu.iter().copied().max().unwrap_or(1));
            if let Some(o) = cli.order {
                config = config.with_order(o);
            }
            let rec = SpectralRecursion::new(config);
            let v = rec.expansion_coefficient(*g, mu)?;
            let mut values = Map::new();
            values.insert("value".into(), q(&v));
            if *terms {
                let w = rec.correlator(*g, mu.len())?;
                let t: Map<String, Value> = w
                    .terms()
                    .iter()
                    .map(|(k, c)| {
                        let key: Vec<String> = k.iter().map(|(i, p)| format!("{i}:{p}")).collect();
                        (key.join(" "), Value::String(c.to_string()))
                    })
                    .collect();
                values.insert("terms".into(), Value::Object(t));
            }
            Ok((Doc::fields(json!({"r": r, "s": s, "g": g, "mu": list(mu)}), values), EXIT_OK))
        }
        Command::Verify(args) => verify(args, cli.order, log),
        Command::Table { kind, r, s, g, n, mu_sum_max } => table(*kind, *r, s.unwrap_or(*r), *g, *n, *mu_sum_max, cli.order),
    }
}

fn grid_query(args: &VerifyArgs) -> Value {
    json!({
        "suite": format!("{:?}", args.suite).to_lowercase(),
        "r_max": args.r_max, "g_max": args.g_max, "n_max": args.n_max, "mu_sum_max": args.mu_sum_max,
    })
}

fn report_rows(rep: &CrossCheckReport) -> Vec<Map<String, Value>> {
    rep.instances
        .iter()
        .map(|rec| {
            let mut row = Map::new();
            row.insert("r".into(), json!(rec.query.r));
            row.insert("s".into(), json!(rec.query.s));
            row.insert("g".into(), json!(rec.query.g));
            row.insert("mu".into(), list(&rec.query.mu));
            for p in PATHS {
                if let Some(v) = rec.values.get(p) {
                    row.insert(p.into(), json!(v));
                }
                if let Some(e) = rec.errors.get(p) {
                    row.insert(format!("{p}_error"), json!(e));
                }
            }
            for (k, ok) in &rec.checks {
                row.insert(k.clone(), json!(ok));
            }
            row.insert("pass".into(), json!(rec.pass));
            row.insert("elapsed_ms".into(), json!(rec.elapsed_ms));
            row
        })
        .collect()
}

fn verify(args: &VerifyArgs, order: Option<usize>, log: &mut String) -> chiodo_core::Result<(Doc, i32)> {
    if args.r_max == 0 {
        return Err(Error::Invalid("--r-max must be at least 1".into()));
    }
    let start = Instant::now();
    let (rows, notes, pass) = match args.suite {
        Suite::Cross | Suite::General => {
            let grid = if args.suite == Suite::Cross {
                Grid::hurwitz(args.r_max, args.g_max, args.n_max, args.mu_sum_max)
            } else {
                Grid { s: SChoice::UpToRPlus(2), divisible_only: false, ..Grid::hurwitz(args.r_max, args.g_max, args.n_max, args.mu_sum_max) }
            };
            let rep = cross_check_with_order(&grid, order);
            (report_rows(&rep), rep.notes.clone(), rep.all_pass)
        }
        Suite::Identities => identity_rows(args.r_max, order.unwrap_or(8))?,
        Suite::Oracles => oracle_rows(args)?,
    };
    let failed = rows.iter().filter(|r| r.get("pass") == Some(&Value::Bool(false))).count();
    log.push_str(&format!(
        "{} checks, {} failed, {:.1}s\n",
        rows.len(),
        failed,
        start.elapsed().as_secs_f64()
    ));
    let mut values = Map::new();
    values.insert("all_pass".into(), json!(pass));
    values.insert("notes".into(), list(&notes));
    values.insert("elapsed_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    let doc = Doc::report(grid_query(args), values, rows);
    Ok((doc, if pass { EXIT_OK } else { EXIT_COMPUTATION }))
}

type Rows = (Vec<Map<String, Value>>, Vec<String>, bool);

fn identity_rows(r_max: u32, order: usize) -> chiodo_core::Result<Rows> {
    let mut kinds = Vec::new();
    for r in 1..=r_max {
        for s in 1..=r {
            kinds.push((r, IdentityKind::LaplaceY { s, i: 0 }, "laplace-y"));
        }
        for s in 1..=r + 1 {
            kinds.push((r, IdentityKind::ConditionY { s, i: r - 1 }, "condition-y"));
        }
        for j in 0..r {
            kinds.push((r, IdentityKind::LaplaceB { i: 0, j }, "laplace-B"));
        }
        for a in 1..=r {
            kinds.push((r, IdentityKind::XiExpansion { a }, "xi-expansion"));
        }
    }
    let mut rows = Vec::new();
    let mut all = true;
    for (r, kind, name) in kinds {
        let d = series_identity_check(kind, r, order)?;
        let pass = match kind {
            IdentityKind::ConditionY { s, .. } if s > r => {
                let f = chiodo_core::arith::CyclotomicField::new(r as usize);
                d == condition_y_defect(r, s, order).map(&f, |x| chiodo_core::arith::Cyclotomic::from_rational_in(&f, x.clone()))
            }
            _ => d.is_zero(),
        };
        all &= pass;
        let mut row = Map::new();
        row.insert("kind".into(), json!(name));
        row.insert("r".into(), json!(r));
        row.insert("params".into(), json!(format!("{kind:?}")));
        row.insert("order".into(), json!(order));
        row.insert("pass".into(), json!(pass));
        rows.push(row);
    }
    Ok((rows, vec![], all))
}

fn oracle_rows(args: &VerifyArgs) -> chiodo_core::Result<Rows> {
    let mut rows = Vec::new();
    let mut all = true;
    for inst in Grid::hurwitz(args.r_max, args.g_max, args.n_max, args.mu_sum_max.min(DEFAULT_CEILING)).instances() {
        let query = HurwitzQuery::new(inst.g, inst.r, inst.mu.clone())?;
        let a = orbifold_hurwitz(&query)?;
        let b = enumerate_oracle(&query)?;
        all &= a == b;
        let mut row = Map::new();
        row.insert("r".into(), json!(inst.r));
        row.insert("g".into(), json!(inst.g));
        row.insert("mu".into(), list(&inst.mu));
        row.insert("characters".into(), q(&a));
        row.insert("enumeration".into(), q(&b));
        row.insert("pass".into(), json!(a == b));
        rows.push(row);
    }
    for d in 1..=8 {
        let ok = CharacterTable::of(d).is_orthogonal();
        all &= ok;
        let mut row = Map::new();
        row.insert("orthogonality_degree".into(), json!(d));
        row.insert("pass".into(), json!(ok));
        rows.push(row);
    }
    Ok((rows, vec![format!("enumeration ceiling {DEFAULT_CEILING}")], all))
}

fn table(kind: TableKind, r: u32, s: u32, g: u32, n: usize, mu_sum_max: u64, order: Option<usize>) -> chiodo_core::Result<(Doc, i32)> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::Unstable { g, n });
    }
    let divisible = matches!(kind, TableKind::Hurwitz | TableKind::Jpt);
    let grid = Grid {
        r_values: vec![r],
        s: SChoice::Range(s, s),
        g_max: g,
        n_max: n,
        mu_sum_max,
        divisible_only: divisible,
    };
    let mut config = SpectralCurveConfig::new(r, s)?.with_mu_max(mu_sum_max.max(1));
    if let Some(o) = order {
        config = config.with_order(o);
    }
    let rec = SpectralRecursion::new(config);
    let mut rows = Vec::new();
    for inst in grid.instances().into_iter().filter(|i| i.g == g && i.mu.len() == n) {
        let mut row = Map::new();
        row.insert("mu".into(), list(&inst.mu));
        let v = match kind {
            TableKind::Hurwitz => {
                let query = HurwitzQuery::new(g, r, inst.mu.clone())?;
                row.insert("b".into(), json!(query.branch_points()));
                orbifold_hurwitz(&query)?
            }
            TableKind::ClosedForm => closed_form_rhs(r, s, g, &inst.mu)?,
            TableKind::Jpt => jpt_rhs(r, g, &inst.mu)?,
            TableKind::Recursion => rec.expansion_coefficient(g, &inst.mu)?,
        };
        row.insert("value".into(), q(&v));
        rows.push(row);
    }
    let kind_name = kind.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default();
    let query = json!({"kind": kind_name, "r": r, "s": s, "g": g, "n": n, "mu_sum_max": mu_sum_max});
    Ok((Doc::table(query, rows), EXIT_OK))
}
