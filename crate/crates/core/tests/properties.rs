use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use charlab::arithmetic::{factorize, gcd, unit_group};
use charlab::characters::{enumerate_characters, Character, Parity, RandomUnimodular};
use charlab::charsums::{gauss_sum, max_partial_sum};
use charlab::kernels::{fejer, lemma22_gap, CoefficientSequence};
use charlab::numeric::format_sig12;
use charlab::pretense::{distance_squared, reciprocal_prime_sum};

fn character(q: u64, index: u64) -> Character {
    let group = Arc::new(unit_group(q).unwrap());
    let k = index % group.phi();
    Character::from_index(group, k).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorization_multiplies_back(n in 2u64..1_000_000_000_000) {
        let f = factorize(n).unwrap();
        let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(product, n);
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn discrete_log_round_trip(q in 1u64..5000, n in -100_000i64..100_000) {
        let g = unit_group(q).unwrap();
        match g.log(n) {
            Some(exps) => prop_assert_eq!(g.reconstruct(&exps), n.rem_euclid(q as i64) as u64),
            None => prop_assert!(q > 1 && gcd(n.unsigned_abs() % q, q) != 1),
        }
    }

    #[test]
    fn characters_are_completely_multiplicative(q in 1u64..400, k in any::<u64>(), a in -5000i64..5000, b in -5000i64..5000) {
        let chi = character(q, k);
        let product = match (chi.evaluate(a), chi.evaluate(b)) {
            (Some(x), Some(y)) => Some(x * y),
            _ => None,
        };
        prop_assert_eq!(chi.evaluate(a * b), product);
    }

    #[test]
    fn characters_are_periodic(q in 1u64..400, k in any::<u64>(), n in -5000i64..5000) {
        let chi = character(q, k);
        prop_assert_eq!(chi.evaluate(n), chi.evaluate(n + q as i64));
    }

    /// The conductor is the least `d | q` with `chi(n) = 1` for every unit `n = 1 (mod d)`.
    #[test]
    fn conductor_is_least_inducing_modulus(q in 1u64..300, k in any::<u64>()) {
        let chi = character(q, k);
        let trivial_on = |d: u64| {
            (1..=q as i64)
                .filter(|&n| gcd(n as u64, q) == 1 && (n - 1) % d as i64 == 0)
                .all(|n| chi.exponent_at(n) == Some(0))
        };
        let d = chi.conductor();
        prop_assert_eq!(q % d, 0);
        prop_assert!(trivial_on(d));
        for e in (1..d).filter(|e| q % e == 0) {
            prop_assert!(!trivial_on(e), "q={} d={} e={}", q, d, e);
        }
        prop_assert_eq!(chi.is_primitive(), d == q);
    }

    #[test]
    fn odd_order_forces_even(q in 3u64..2000, k in any::<u64>()) {
        let chi = character(q, k);
        if chi.order() % 2 == 1 {
            prop_assert_eq!(chi.parity(), Parity::Even);
        }
        let expected = if chi.parity() == Parity::Even { 1.0 } else { -1.0 };
        prop_assert_eq!(chi.value(-1), Complex64::new(expected, 0.0));
    }

    #[test]
    fn conjugate_has_same_maximum(q in 3u64..1500, k in any::<u64>()) {
        let chi = character(q, k);
        prop_assume!(!chi.is_principal());
        prop_assert_eq!(max_partial_sum(&chi).unwrap(), max_partial_sum(&chi.conj()).unwrap());
    }

    /// `tau(conj chi) = chi(-1) conj(tau(chi))`, and `|tau|^2 = q` when primitive.
    #[test]
    fn gauss_sum_identities(q in 1u64..600, k in any::<u64>()) {
        let chi = character(q, k);
        let t = gauss_sum(&chi).value;
        let tc = gauss_sum(&chi.conj()).value;
        prop_assert!((tc - chi.value(-1) * t.conj()).norm() < 1e-9);
        if chi.is_primitive() {
            prop_assert!((t.norm_sqr() / q as f64 - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn distance_is_a_bounded_symmetric_pseudometric(s in any::<u64>(), t in any::<u64>(), y in 2.0f64..5000.0) {
        let (f, g) = (RandomUnimodular::new(s), RandomUnimodular::new(t));
        let fg = distance_squared(&f, &g, y).unwrap();
        prop_assert_eq!(fg.dist_sq, distance_squared(&g, &f, y).unwrap().dist_sq);
        prop_assert_eq!(distance_squared(&f, &f, y).unwrap().dist_sq, 0.0);
        let primes: Vec<u64> = charlab::arithmetic::primes_up_to(y).iter().copied().collect();
        prop_assert!(fg.dist_sq >= 0.0 && fg.dist_sq <= 2.0 * reciprocal_prime_sum(&primes) + 1e-12);
    }

    #[test]
    fn distance_grows_with_cutoff(s in any::<u64>(), q in 3u64..200, k in any::<u64>(), y1 in 2.0f64..3000.0, dy in 0.0f64..3000.0) {
        let f = RandomUnimodular::new(s);
        let chi = character(q, k);
        let a = distance_squared(&f, &chi, y1).unwrap().dist_sq;
        let b = distance_squared(&f, &chi, y1 + dy).unwrap().dist_sq;
        prop_assert!(a <= b + 1e-12);
    }

    #[test]
    fn fejer_is_nonnegative(n in 1u64..500, theta in -2.0f64..2.0) {
        prop_assert!(fejer(n, theta) >= -1e-12);
        prop_assert!(fejer(n, theta) <= n as f64 + 1e-9);
    }

    #[test]
    fn smoothing_gap_is_nonnegative(seed in any::<u64>(), x in 2usize..80) {
        let a = CoefficientSequence::random(x, seed);
        let g = lemma22_gap(&a, x as f64).unwrap();
        prop_assert!(g.gap >= 0.0);
        prop_assert!(g.best_n >= 1 && g.best_n <= x);
    }

    #[test]
    fn sig12_round_trips(v in -1e12f64..1e12) {
        let s = format_sig12(v);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs().max(1e-300));
    }
}

#[test]
fn parity_splits_evenly() {
    for q in 3..=600 {
        let chars = enumerate_characters(q).unwrap();
        let even = chars.iter().filter(|c| c.parity() == Parity::Even).count();
        assert_eq!(2 * even, chars.len(), "q={q}");
    }
}

#[test]
fn primitive_counts_follow_mobius_inversion() {
    // sum over d | q of #primitive(d) = phi(q)
    let counts: Vec<usize> = (0..=300u64)
        .map(|q| if q == 0 { 0 } else { enumerate_characters(q).unwrap().iter().filter(|c| c.is_primitive()).count() })
        .collect();
    for q in 1..=300u64 {
        let total: usize = (1..=q).filter(|d| q % d == 0).map(|d| counts[d as usize]).sum();
        assert_eq!(total as u64, charlab::arithmetic::euler_phi(q), "q={q}");
    }
}
