//! Helpers shared by the integration targets. Primality and factoring here
//! are plain trial division so they stay independent of the sieve.
#![allow(dead_code)]

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

use plp_core::PlpSequence;

pub fn trial_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

pub fn trial_big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        while n % d == 0 {
            n /= d;
            count += 1;
        }
        d += 1;
    }
    count + u32::from(n > 1)
}

pub fn trial_primes(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| trial_is_prime(n)).collect()
}

fn coprime(a: u64, b: u64) -> bool {
    num_integer::gcd(a, b) == 1
}

pub fn to_sequence(mut terms: Vec<u64>) -> PlpSequence {
    terms.sort_unstable();
    PlpSequence::new(terms.into_iter().map(BigUint::from).collect()).expect("pairwise coprime by construction")
}

/// Random all-composite pairwise coprime set with terms `≤ limit`: each
/// term takes an unused least prime factor `p ≤ √limit`, then is grown by
/// powers of `p` or larger unused primes while it fits.
pub fn random_composite_plp<R: Rng>(rng: &mut R, primes: &[u64], limit: u64, len: usize) -> Vec<u64> {
    let small: Vec<u64> = primes.iter().copied().take_while(|p| p * p <= limit).collect();
    let mut used = std::collections::HashSet::new();
    let mut lpfs: Vec<u64> = small.choose_multiple(rng, len.min(small.len())).copied().collect();
    lpfs.sort_unstable();
    used.extend(lpfs.iter().copied());
    let mut terms = Vec::with_capacity(lpfs.len());
    for &p in &lpfs {
        let mut a = p;
        loop {
            // second factor: p again or a larger unused prime
            let q = if rng.gen_bool(0.3) {
                p
            } else {
                let hi = primes.partition_point(|&q| q <= limit / a);
                let lo = primes.partition_point(|&q| q <= p);
                if lo >= hi {
                    p
                } else {
                    let q = primes[rng.gen_range(lo..hi)];
                    if used.contains(&q) {
                        p
                    } else {
                        q
                    }
                }
            };
            if a > limit / q {
                break;
            }
            a *= q;
            used.insert(q);
            if a > p && rng.gen_bool(0.5) {
                break;
            }
        }
        if a == p {
            a = p * p;
        }
        terms.push(a);
    }
    terms
}

/// Random pairwise coprime set of `len` terms in `[2, n]`: composites
/// first, topped up with coprime primes. `None` if the draw falls short.
pub fn random_plp_at_least<R: Rng>(rng: &mut R, n: u64, len: usize) -> Option<Vec<u64>> {
    let mut pool: Vec<u64> = (2..=n).collect();
    pool.shuffle(rng);
    let (composites, primes): (Vec<u64>, Vec<u64>) = pool.into_iter().partition(|&x| !trial_is_prime(x));
    let mut chosen: Vec<u64> = Vec::new();
    let take_composites = rng.gen_range(0..=len);
    for c in composites {
        if chosen.len() >= take_composites {
            break;
        }
        if chosen.iter().all(|&x| coprime(x, c)) {
            chosen.push(c);
        }
    }
    for p in primes {
        if chosen.len() >= len {
            break;
        }
        if chosen.iter().all(|&x| coprime(x, p)) {
            chosen.push(p);
        }
    }
    (chosen.len() >= len).then_some(chosen)
}

/// Random pairwise coprime set in `[2, max_term]`, grown until `done`
/// accepts it or the candidates run out.
pub fn random_plp_until<R: Rng>(rng: &mut R, max_term: u64, mut done: impl FnMut(&[u64]) -> bool) -> Vec<u64> {
    let mut pool: Vec<u64> = (2..=max_term).collect();
    pool.shuffle(rng);
    let mut chosen = Vec::new();
    for c in pool {
        if chosen.iter().all(|&x| coprime(x, c)) {
            chosen.push(c);
            chosen.sort_unstable();
            if done(&chosen) {
                break;
            }
        }
    }
    chosen
}
