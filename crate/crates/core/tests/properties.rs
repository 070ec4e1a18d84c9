use chiodo_core::arith::{factorial, int, parse_rational, rat, Rational};
use chiodo_core::cohft::{chiodo_integral, ChiodoSpec};
use chiodo_core::harness::jpt_rhs;
use chiodo_core::hurwitz::{disconnected_count, orbifold_hurwitz, HurwitzQuery, Partition};
use chiodo_core::recursion::{SpectralCurveConfig, SpectralRecursion};
use chiodo_core::series::{lagrange_invert, residue_at, Poly, RationalFunction, Series};
use chiodo_core::Field;
use num_traits::Zero;
use proptest::prelude::*;

fn degree_vector(n: usize, total: usize, seed: u64) -> Vec<u32> {
    let mut d = vec![0u32; n];
    let mut x = seed;
    for _ in 0..total {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        d[(x >> 33) as usize % n] += 1;
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lagrange_inverse_composes_to_identity(r in 1u32..=5, order in 2usize..=12) {
        let z = lagrange_invert(r, order).unwrap();
        let x = Series::<Rational>::var(&()).truncate(order as i64 + 1);
        let direct = x.mul(&x.pow(r).neg().exp().unwrap());
        prop_assert_eq!(direct.compose(&z).unwrap(), x);
    }

    #[test]
    fn residues_on_the_line_sum_to_zero(
        poles in proptest::collection::btree_set(-6i64..6, 1..4),
        mult_seed in any::<u64>(),
        num in proptest::collection::vec(-5i64..5, 1..4),
    ) {
        let poles: Vec<i64> = poles.into_iter().collect();
        let mut den = Poly::constant(int(1));
        for (j, &a) in poles.iter().enumerate() {
            let k = 1 + (mult_seed >> (2 * j)) as usize % 3;
            for _ in 0..k {
                den = den.mul(&Poly::new(&(), vec![int(-a), int(1)]));
            }
        }
        let deg = den.degree().unwrap();
        prop_assume!(deg >= 2);
        let coeffs: Vec<Rational> = num.iter().take(deg - 1).map(|&c| int(c)).collect();
        let f = RationalFunction::new(Poly::new(&(), coeffs), den).unwrap();
        let total = poles.iter().fold(Rational::zero(), |acc, &a| acc + residue_at(&f, &int(a)).unwrap());
        prop_assert_eq!(total, Rational::zero());
    }

    #[test]
    fn chiodo_vanishes_off_congruence(r in 1u32..=4, s in 0u32..=5, g in 0u32..=1, n in 1usize..=4, seed in any::<u64>()) {
        prop_assume!(2 * g as i64 - 2 + n as i64 > 0 && 3 * g as usize + n <= 5);
        let a: Vec<u32> = (0..n).map(|i| 1 + ((seed >> (3 * i)) as u32 % r)).collect();
        let spec = ChiodoSpec::new(r, s, g, a).unwrap();
        let d = degree_vector(n, spec.dimension(), seed);
        let v = chiodo_integral(&spec, &d).unwrap();
        if !spec.congruence_holds() {
            prop_assert_eq!(v, Rational::zero());
        }
    }

    #[test]
    fn hurwitz_parity_vanishing(d in 1u32..=6, nu_i in any::<prop::sample::Index>(), mu_i in any::<prop::sample::Index>(), b in 0u32..6) {
        let all = Partition::all(d);
        let nu = nu_i.get(&all);
        let mu = mu_i.get(&all);
        let parity = nu.sign() * mu.sign() * if b % 2 == 0 { 1 } else { -1 };
        let v = disconnected_count(nu, mu, b).unwrap();
        if parity != 1 {
            prop_assert_eq!(v, Rational::zero());
        }
    }

    #[test]
    fn jpt_closes_with_characters(r in 1u32..=3, g in 0u32..=1, parts in proptest::collection::vec(1u64..=4, 1..=3)) {
        let d: u64 = parts.iter().sum();
        prop_assume!(d % r as u64 == 0 && d <= 7 && 2 * g as i64 - 2 + parts.len() as i64 > 0);
        let q = HurwitzQuery::new(g, r, parts.clone()).unwrap();
        let b = Rational::from_integer(factorial(q.branch_points() as u64));
        prop_assert_eq!(jpt_rhs(r, g, &parts).unwrap() * b, orbifold_hurwitz(&q).unwrap());
    }

    #[test]
    fn rationals_round_trip(p in -10_000i64..10_000, q in 1i64..10_000) {
        let x = rat(p, q);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn correlators_symmetric_and_coefficients_rational(r in 1u32..=3, ds in 0u32..=2, g in 0u32..=1, mu in proptest::collection::vec(1u64..=3, 1..=3)) {
        prop_assume!(2 * g as i64 - 2 + mu.len() as i64 > 0);
        let s = r + ds;
        let rec = SpectralRecursion::new(SpectralCurveConfig::new(r, s).unwrap());
        let w = rec.correlator(g, mu.len()).unwrap();
        prop_assert!(w.is_symmetric());
        prop_assert!(w.is_rotation_covariant());
        // rational_part is applied inside; an Err would signal broken Galois symmetry
        prop_assert!(rec.expansion_coefficient(g, &mu).is_ok());
        let mut rev = mu.clone();
        rev.reverse();
        prop_assert_eq!(rec.expansion_coefficient(g, &mu).unwrap(), rec.expansion_coefficient(g, &rev).unwrap());
    }
}

#[test]
fn labelled_and_unlabelled_simple_hurwitz() {
    let q = HurwitzQuery::new(0, 1, vec![1, 1, 1]).unwrap();
    let h = orbifold_hurwitz(&q).unwrap();
    let labelings = Rational::from_integer(q.mu_partition().labelings());
    assert_eq!(h / labelings, int(4));
}

#[test]
fn field_trait_is_usable_generically() {
    fn square<F: Field>(x: &F) -> F {
        x.times(x)
    }
    assert_eq!(square(&rat(2, 3)), rat(4, 9));
}
