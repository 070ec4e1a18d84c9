use chiodo_cli::{run, Outcome, EXIT_COMPUTATION, EXIT_OK, EXIT_USAGE};
use chiodo_core::arith::parse_rational;
use serde_json::Value;

fn chiodo(args: &str) -> Outcome {
    let mut argv = vec!["chiodo".to_string(), "--no-cache".to_string(), "--quiet".to_string()];
    argv.extend(args.split_whitespace().map(str::to_string));
    run(argv)
}

fn json(out: &Outcome) -> Value {
    assert_eq!(out.status, EXIT_OK, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("valid JSON")
}

/// Drops timing fields, which are the only permitted difference between runs.
fn without_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(without_timing);
        }
        Value::Array(a) => a.iter_mut().for_each(without_timing),
        _ => {}
    }
}

#[test]
fn hurwitz_anchor() {
    let v = json(&chiodo("hurwitz --r 1 --g 0 --mu 1,1,1"));
    assert_eq!(v["h"], "24");
    assert_eq!(v["b"], 4);
    assert_eq!(v["h_over_b_factorial"], "1");
    let v = json(&chiodo("hurwitz --r 2 --g 0 --mu 1,1,2 --enumerate"));
    assert_eq!(v["h_enumerated"], v["h"]);
    assert_eq!(v["h_over_b_factorial"], "4");
}

#[test]
fn chiodo_congruence_failure_is_zero() {
    let v = json(&chiodo("intersect chiodo --r 2 --s 2 --g 0 --a 1,1,1 --d 0,0,0"));
    assert_eq!(v["value"], "0");
}

#[test]
fn intersections() {
    assert_eq!(json(&chiodo("intersect psi --g 1 --d 1"))["value"], "1/24");
    assert_eq!(json(&chiodo("intersect kappa --g 0 --d 0,0,0,0 --kappa 1"))["value"], "1");
    assert_eq!(json(&chiodo("intersect elsv --r 2 --s 2 --g 0 --mu 1,1,2"))["value"], "1/2");
    assert_eq!(json(&chiodo("intersect chiodo --r 1 --s 1 --g 1 --a 1 --d 0 --unit dilaton"))["value"], "-1/24");
    assert_eq!(json(&chiodo("bernoulli --m 2 --x 3/2"))["value"], "11/12");
}

#[test]
fn recursion_value_and_terms() {
    let v = json(&chiodo("recursion --r 2 --s 2 --g 0 --mu 1,1,2 --terms"));
    assert_eq!(v["value"], "4");
    assert!(!v["terms"].as_object().unwrap().is_empty());
    assert_eq!(json(&chiodo("recursion --r 3 --s 1 --g 1 --mu 2 --order 20"))["value"], "5/8");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        "hurwitz --r 2 --g 0 --mu 1",
        "recursion --r 2 --s 2 --g 0 --mu 1,1",
        "intersect psi --g 0 --d 0,0",
        "hurwitz --r 1 --g 0 --mu 1,1,1 --frobnicate",
        "intersect chiodo --r 2 --s 2 --g 0 --a 1,1 --d 0,0,0",
        "table --kind hurwitz --r 1 --g 0 --n 2",
        "verify --suite nonsense",
        "bernoulli --m 2 --x 1/0",
    ] {
        let out = chiodo(args);
        assert_eq!(out.status, EXIT_USAGE, "{args}: {out:?}");
        assert!(out.stdout.is_empty());
    }
    // diagnostics survive --quiet for errors
    assert!(chiodo("hurwitz --r 2 --g 0 --mu 1").stderr.contains("not divisible"));
}

#[test]
fn enumeration_above_ceiling_is_a_usage_error() {
    assert_eq!(chiodo("hurwitz --r 1 --g 0 --mu 4,4 --enumerate").status, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let out = run(["chiodo", "--help"]);
    assert_eq!(out.status, EXIT_OK);
    assert!(out.stdout.contains("verify"));
}

#[test]
fn verify_cross_acceptance_grid() {
    let v = json(&chiodo("verify --suite cross --r-max 2 --g-max 1 --mu-sum-max 6"));
    assert_eq!(v["all_pass"], true);
    let report = v["report"].as_array().unwrap();
    assert!(report.len() > 20);
    assert!(report.iter().all(|r| r["pass"] == true));
}

#[test]
fn verify_other_suites() {
    for suite in ["identities --r-max 3", "oracles --r-max 2 --mu-sum-max 5", "general --r-max 2 --g-max 0 --n-max 3 --mu-sum-max 4"] {
        let v = json(&chiodo(&format!("verify --suite {suite}")));
        assert_eq!(v["all_pass"], true, "{suite}");
    }
}

#[test]
fn tables_in_both_formats() {
    let v = json(&chiodo("table --kind recursion --r 2 --s 1 --g 0 --n 3 --mu-sum-max 5"));
    let rows = v["values"].as_array().unwrap();
    assert!(!rows.is_empty());
    let j = json(&chiodo("table --kind closed-form --r 2 --s 1 --g 0 --n 3 --mu-sum-max 5"));
    assert_eq!(j["values"], v["values"]);
    let csv = chiodo("--format csv table --kind hurwitz --r 2 --g 0 --n 3 --mu-sum-max 6");
    assert_eq!(csv.status, EXIT_OK);
    let mut lines = csv.stdout.lines();
    assert_eq!(lines.next().unwrap(), "g,kind,mu_sum_max,n,r,s,b,mu,value");
    assert_eq!(lines.next().unwrap(), "0,hurwitz,6,3,2,2,3,\"2,1,1\",24");
    assert_eq!(lines.count(), 3);
}

#[test]
fn rationals_round_trip() {
    let v = json(&chiodo("table --kind jpt --r 1 --g 1 --n 2 --mu-sum-max 4"));
    for row in v["values"].as_array().unwrap() {
        let s = row["value"].as_str().unwrap();
        assert_eq!(parse_rational(s).unwrap().to_string(), s);
    }
}

#[test]
fn warm_and_cold_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.tsv");
    let args = |extra: &str| {
        let mut v = vec!["chiodo".to_string(), "--quiet".to_string(), "--cache".to_string(), path.display().to_string()];
        v.extend(extra.split_whitespace().map(str::to_string));
        v
    };
    let cmd = "verify --suite cross --r-max 2 --g-max 1 --n-max 2 --mu-sum-max 4";
    let cold = run(args(cmd));
    assert!(path.exists());
    let warm = run(args(cmd));
    let (mut a, mut b) = (json(&cold), json(&warm));
    without_timing(&mut a);
    without_timing(&mut b);
    assert_eq!(a, b);
    let single = "intersect elsv --r 2 --s 1 --g 1 --mu 1,2";
    assert_eq!(run(args(single)).stdout, run(args(single)).stdout);
}

#[test]
fn unreadable_cache_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.tsv");
    std::fs::write(&path, "not a cache line\n").unwrap();
    let out = run(["chiodo", "--cache", path.to_str().unwrap(), "intersect", "psi", "--g", "1", "--d", "1"]);
    assert_eq!(out.status, EXIT_COMPUTATION, "{out:?}");
}
