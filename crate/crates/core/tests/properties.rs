mod common;

use std::sync::OnceLock;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plp_core::certify::Verdict;
use plp_core::{
    check_composite_reciprocal_bound, compute_thresholds, decompose_reciprocal_sum, low_omega_witness,
    max_composite_plp_size, max_composite_reciprocal_sum, p_constant, prime_witness_by_density, prime_zeta_direct,
    prime_zeta_mobius, reciprocal_sum, validate_plp, DensityMode, PlpError, SieveTables,
};

use common::*;

fn sieve() -> &'static SieveTables {
    static T: OnceLock<SieveTables> = OnceLock::new();
    T.get_or_init(|| SieveTables::build(1_000_000).unwrap())
}

fn primes() -> &'static [u64] {
    static P: OnceLock<Vec<u64>> = OnceLock::new();
    P.get_or_init(|| sieve().primes().iter().map(|&p| p as u64).collect())
}

#[test]
fn oracle_size_is_prime_count_at_root() {
    let t = sieve();
    for n in 4..2000 {
        let r = max_composite_plp_size(n, t).unwrap();
        let pi_root = trial_primes(n.isqrt()).len();
        assert_eq!(r.best_size, pi_root, "n = {n}");
    }
}

#[test]
fn oracle_sum_optimum_is_prime_squares() {
    let t = sieve();
    for n in 4..500 {
        let r = max_composite_reciprocal_sum(n, t).unwrap();
        let squares: Vec<BigUint> = trial_primes(n.isqrt()).iter().map(|p| BigUint::from(p * p)).collect();
        assert_eq!(r.witness.terms(), squares, "n = {n}");
    }
}

#[test]
fn oracle_witnesses_pass_checks() {
    let t = sieve();
    for n in (4..1500).step_by(37) {
        for r in [max_composite_plp_size(n, t).unwrap(), max_composite_reciprocal_sum(n, t).unwrap()] {
            assert!(validate_plp(r.witness.terms()).valid);
            let cert = check_composite_reciprocal_bound(&r.witness, t).unwrap();
            assert_eq!(cert.verdict, Verdict::Pass);
            assert!(cert.recheck());
        }
    }
}

#[test]
fn extending_a_maximum_composite_set_forces_a_prime() {
    let t = sieve();
    for n in 4..2000u64 {
        let r = max_composite_plp_size(n, t).unwrap();
        let base = r.witness.terms_u64().unwrap();
        let extensions: Vec<u64> = (2..=n)
            .filter(|c| base.iter().all(|&a| num_integer::gcd(a, *c) == 1))
            .collect();
        assert!(!extensions.is_empty(), "n = {n}");
        for &c in &extensions {
            assert!(trial_is_prime(c), "n = {n}: {c} extends {base:?}");
        }
        let mut grown = base.clone();
        grown.push(extensions[extensions.len() / 2]);
        let cert = prime_witness_by_density(&to_sequence(grown), n, t, DensityMode::Exact).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
    }
}

#[test]
fn density_example_picks_the_only_prime() {
    let t = sieve();
    let cert = prime_witness_by_density(&to_sequence(vec![4, 9, 11, 25, 49]), 100, t, DensityMode::Exact).unwrap();
    assert_eq!(cert.witness.unwrap().term, BigUint::from(11u32));
    let th = compute_thresholds(1_000_000, t).unwrap();
    assert!((177..=179).contains(&th.rs), "{th:?}");
}

#[test]
fn thresholds_are_monotone() {
    let t = sieve();
    let mut prev = compute_thresholds(2, t).unwrap();
    for n in 3..200_000 {
        let th = compute_thresholds(n, t).unwrap();
        assert!(th.exact >= prev.exact && th.exact <= th.rs, "n = {n}");
        prev = th;
    }
    assert_eq!(compute_thresholds(1_000_000, t).unwrap().exact, 169);
}

#[test]
fn p_constant_descends_with_s() {
    let t = sieve();
    let values: Vec<_> = (2..=12).map(|s| p_constant(s, t).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[1].hi < w[0].lo, "{} then {}", w[0], w[1]);
    }
    // P(s) ~ 2^{-s} for large s
    let p12 = values.last().unwrap();
    assert!(p12.lo > 2f64.powi(-12) && p12.hi < 2f64.powi(-12) * 1.01);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composite_sequences_stay_below_p2(seed: u64, len in 1usize..80, limit in 4u64..=1_000_000) {
        let t = sieve();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = to_sequence(random_composite_plp(&mut rng, primes(), limit, len));
        let cert = check_composite_reciprocal_bound(&seq, t).unwrap();
        prop_assert_eq!(cert.verdict, Verdict::Pass);
        prop_assert!(cert.sum.unwrap().hi <= p_constant(2, t).unwrap().lo);
        prop_assert!(cert.recheck());
        let dec = decompose_reciprocal_sum(&seq, t).unwrap();
        prop_assert_eq!(dec.verdict, Verdict::Pass);
        prop_assert_eq!(dec.prime_sum.unwrap().hi, 0.0);
    }

    #[test]
    fn decomposition_parts_enclose_the_sum(seed: u64, max_term in 10u64..5000) {
        let t = sieve();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq = to_sequence(random_plp_until(&mut rng, max_term, |c| c.len() >= 40));
        let cert = decompose_reciprocal_sum(&seq, t).unwrap();
        let (p, c, whole) = (cert.prime_sum.unwrap(), cert.composite_sum.unwrap(), cert.sum.unwrap());
        prop_assert!(p.add(&c).intersects(&whole));
        let composites: Vec<u64> = seq.terms_u64().unwrap().into_iter().filter(|&a| !trial_is_prime(a)).collect();
        prop_assert!(composites.iter().map(|&a| 1.0 / a as f64).sum::<f64>() <= c.hi * (1.0 + 1e-12));
        prop_assert_eq!(cert.verdict, Verdict::Pass);
    }

    #[test]
    fn density_witness_is_prime(seed: u64, n in 4u64..=5000, extra in 0usize..4) {
        let t = sieve();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let th = compute_thresholds(n, t).unwrap();
        let len = th.exact as usize + extra;
        if let Some(terms) = random_plp_at_least(&mut rng, n, len) {
            let seq = to_sequence(terms);
            let cert = prime_witness_by_density(&seq, n, t, DensityMode::Exact).unwrap();
            let w = cert.witness.clone().unwrap();
            prop_assert!(trial_is_prime(w.term.to_string().parse().unwrap()));
            prop_assert!(cert.recheck());
        }
    }

    #[test]
    fn short_sets_are_rejected(n in 4u64..=5000) {
        let t = sieve();
        let th = compute_thresholds(n, t).unwrap();
        let squares: Vec<u64> = trial_primes(n.isqrt()).iter().map(|p| p * p).collect();
        prop_assert_eq!(squares.len() as u64, th.exact - 1);
        let is_below = matches!(
            prime_witness_by_density(&to_sequence(squares), n, t, DensityMode::Exact),
            Err(PlpError::BelowThreshold { .. })
        );
        prop_assert!(is_below);
    }

    #[test]
    fn low_omega_witness_has_few_factors(seed: u64, s in 2u32..=6, max_term in 20u64..2000) {
        let t = sieve();
        let ps = p_constant(s, t).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = random_plp_until(&mut rng, max_term, |c| {
            let big: Vec<BigUint> = c.iter().map(|&x| BigUint::from(x)).collect();
            plp_core::plp::reciprocal_sum_of(&big).lo > ps.hi
        });
        let seq = to_sequence(terms);
        if reciprocal_sum(&seq).lo > ps.hi {
            let cert = low_omega_witness(&seq, s, t).unwrap();
            prop_assert_eq!(cert.verdict, Verdict::Pass);
            let term: u64 = cert.witness.as_ref().unwrap().term.to_string().parse().unwrap();
            prop_assert!(trial_big_omega(term) < s);
            prop_assert!(cert.recheck());
        }
    }

    #[test]
    fn direct_and_mobius_agree(s in 1.3f64..9.0, cutoff in 10u64..=1_000_000) {
        let t = sieve();
        let d = prime_zeta_direct(t, s, cutoff).unwrap();
        let m = prime_zeta_mobius(s, 1e-9).unwrap();
        prop_assert!(d.encloses(&m) || d.intersects(&m), "direct {} Möbius {}", d, m);
        prop_assert!(d.lo <= m.hi);
    }

    #[test]
    fn mobius_descends_in_s(a in 1.2f64..10.0, gap in 0.05f64..2.0) {
        let lo = prime_zeta_mobius(a, 1e-9).unwrap();
        let hi = prime_zeta_mobius(a + gap, 1e-9).unwrap();
        prop_assert!(hi.hi < lo.lo);
    }
}
