//! Least-prime-factor sieve and the integer primitives built on it.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{PlpError, Result};
use crate::interval::{add_up, div_up, ln_down, mul_up, sqrt_up, u64_enclosure};

/// Largest sieve limit accepted by [`build_sieve`].
pub const DEFAULT_MAX_LIMIT: u64 = 100_000_000;

/// Largest operand, in bits, that [`is_prime`] will test.
pub const MAX_PRIMALITY_BITS: u64 = 16_384;

/// Miller–Rabin bases; deterministic for every `n < 3.3·10²⁴`, which covers
/// all of `u64`. Above `2⁶⁴` the same bases give a strong-probable-prime test.
pub const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Least prime factor for every index in `2..=limit`, plus the primes.
///
/// Immutable once built. Indices 0 and 1 hold the sentinel 0.
#[derive(Clone, Debug)]
pub struct SieveTables {
    limit: u64,
    lpf: Vec<u32>,
    primes: Vec<u32>,
}

/// Builds the sieve with the default maximum limit.
pub fn build_sieve(limit: u64) -> Result<SieveTables> {
    SieveTables::build_with_max(limit, DEFAULT_MAX_LIMIT)
}

impl SieveTables {
    pub fn build(limit: u64) -> Result<SieveTables> {
        build_sieve(limit)
    }

    /// Linear sieve: every composite is struck exactly once, by its least
    /// prime factor.
    pub fn build_with_max(limit: u64, max_limit: u64) -> Result<SieveTables> {
        if limit < 2 || limit > max_limit || limit > u32::MAX as u64 {
            return Err(PlpError::Config(format!(
                "sieve limit {limit} outside 2..={}",
                max_limit.min(u32::MAX as u64)
            )));
        }
        let n = limit as usize;
        let mut lpf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::with_capacity(estimate_prime_count(limit));
        for i in 2..=n {
            if lpf[i] == 0 {
                lpf[i] = i as u32;
                primes.push(i as u32);
            }
            let li = lpf[i];
            for &p in &primes {
                if p > li {
                    break;
                }
                let m = i * p as usize;
                if m > n {
                    break;
                }
                lpf[m] = p;
            }
        }
        Ok(SieveTables { limit, lpf, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All primes `≤ limit`, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    fn check_range(&self, n: u64, low: u64) -> Result<()> {
        if n < low || n > self.limit {
            return Err(PlpError::Domain(format!(
                "{n} outside {low}..={} (sieve limit)",
                self.limit
            )));
        }
        Ok(())
    }

    pub fn least_prime_factor(&self, n: u64) -> Result<u64> {
        self.check_range(n, 2)?;
        Ok(self.lpf[n as usize] as u64)
    }

    /// Primality by table lookup, `2 ≤ n ≤ limit`.
    pub fn is_prime(&self, n: u64) -> Result<bool> {
        Ok(self.least_prime_factor(n)? == n)
    }

    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        self.check_range(n, 1)?;
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.lpf[m as usize] as u64;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { n, factors })
    }

    /// `π(x)`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(PlpError::Domain(format!(
                "π({x}) requested beyond sieve limit {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| p as u64 <= x) as u64)
    }

    /// `|{p : p² ≤ n}|`, i.e. `π(⌊√n⌋)` without any floating-point root.
    pub fn prime_count_at_sqrt(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(PlpError::Domain("prime_count_at_sqrt requires n ≥ 1".into()));
        }
        let r = n.isqrt();
        if r > self.limit {
            return Err(PlpError::Domain(format!(
                "isqrt({n}) = {r} exceeds sieve limit {}",
                self.limit
            )));
        }
        let n = n as u128;
        Ok(self
            .primes
            .partition_point(|&p| (p as u128) * (p as u128) <= n) as u64)
    }
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Ω(n): prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// ω(n): distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Möbius function μ(n).
    pub fn mobius(&self) -> i8 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn product(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| (p as u128).pow(e))
            .product()
    }
}

pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Outcome of [`is_prime`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Primality {
    pub prime: bool,
    /// Set when `prime` rests on a strong-probable-prime test (`n ≥ 2⁶⁴`).
    /// Composite verdicts are always proven by a Miller–Rabin witness or a
    /// trial divisor.
    pub probabilistic: bool,
}

impl Primality {
    fn certain(prime: bool) -> Self {
        Primality {
            prime,
            probabilistic: false,
        }
    }
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

pub fn is_prime(n: &BigUint) -> Result<Primality> {
    if let Some(small) = n.to_u64() {
        return Ok(Primality::certain(is_prime_u64(small)));
    }
    if n.bits() > MAX_PRIMALITY_BITS {
        return Err(PlpError::Domain(format!(
            "{}-bit operand exceeds the {MAX_PRIMALITY_BITS}-bit primality limit",
            n.bits()
        )));
    }
    for &p in &SMALL_PRIMES {
        if (n % p).is_zero() {
            return Ok(Primality::certain(false));
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    'bases: for &a in &MR_WITNESSES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'bases;
            }
        }
        return Ok(Primality::certain(false));
    }
    Ok(Primality {
        prime: true,
        probabilistic: true,
    })
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit operands.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = p as u64;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Upper bound on `n/ln n · (1 + 3/(2 ln n))`, which exceeds `π(n)` for
/// every `n > 1`.
pub fn rs_upper_bound(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(PlpError::Domain(format!("rs_upper_bound requires n ≥ 2, got {n}")));
    }
    let (_, n_hi) = u64_enclosure(n);
    let (n_lo, _) = u64_enclosure(n);
    let log = ln_down(n_lo);
    let head = div_up(n_hi, log);
    let factor = add_up(1.0, div_up(1.5, log));
    Ok(mul_up(head, factor))
}

/// Upper bound on `2√n/ln n · (1 + 3/ln n)`: the bound above evaluated at
/// `√n`.
pub fn rs_upper_bound_at_sqrt(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(PlpError::Domain(format!("threshold requires n ≥ 2, got {n}")));
    }
    let (n_lo, n_hi) = u64_enclosure(n);
    let log = ln_down(n_lo);
    let head = div_up(mul_up(2.0, sqrt_up(n_hi)), log);
    let factor = add_up(1.0, div_up(3.0, log));
    Ok(mul_up(head, factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn trial_lpf(n: u64) -> u64 {
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return d;
            }
            d += 1;
        }
        n
    }

    fn trial_is_prime(n: u64) -> bool {
        n >= 2 && trial_lpf(n) == n
    }

    #[test]
    fn sieve_of_ten() {
        let t = build_sieve(10).unwrap();
        let lpf: Vec<u64> = (2..=10).map(|n| t.least_prime_factor(n).unwrap()).collect();
        assert_eq!(lpf, vec![2, 3, 2, 5, 2, 7, 2, 3, 2]);
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
    }

    #[test]
    fn smallest_sieve() {
        let t = build_sieve(2).unwrap();
        assert_eq!(t.primes(), &[2]);
    }

    #[test]
    fn sieve_limit_out_of_range() {
        assert!(matches!(build_sieve(1), Err(PlpError::Config(_))));
        assert!(matches!(build_sieve(0), Err(PlpError::Config(_))));
        assert!(matches!(
            SieveTables::build_with_max(1001, 1000),
            Err(PlpError::Config(_))
        ));
    }

    #[test]
    fn lpf_examples_and_domain() {
        let t = build_sieve(100).unwrap();
        assert_eq!(t.primes().len(), 25);
        assert_eq!(t.least_prime_factor(91).unwrap(), 7);
        assert_eq!(t.least_prime_factor(2).unwrap(), 2);
        assert_eq!(t.least_prime_factor(97).unwrap(), 97);
        assert!(matches!(t.least_prime_factor(1), Err(PlpError::Domain(_))));
        assert!(matches!(t.least_prime_factor(101), Err(PlpError::Domain(_))));
    }

    #[test]
    fn factorize_examples() {
        let t = build_sieve(1000).unwrap();
        let f = t.factorize(360).unwrap();
        assert_eq!(f.factors, vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!((f.big_omega(), f.omega()), (6, 3));
        let one = t.factorize(1).unwrap();
        assert!(one.factors.is_empty());
        assert_eq!((one.big_omega(), one.omega()), (0, 0));
        let p = t.factorize(97).unwrap();
        assert_eq!(p.factors, vec![(97, 1)]);
        assert_eq!(p.big_omega(), 1);
        assert!(matches!(t.factorize(0), Err(PlpError::Domain(_))));
        assert!(matches!(t.factorize(1001), Err(PlpError::Domain(_))));
    }

    #[test]
    fn prime_count_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(t.prime_count(10).unwrap(), 4);
        assert_eq!(t.prime_count(1).unwrap(), 0);
        assert_eq!(t.prime_count(0).unwrap(), 0);
        assert_eq!(t.prime_count(100).unwrap(), 25);
        assert!(t.prime_count(101).is_err());
    }

    #[test]
    fn prime_count_at_sqrt_examples() {
        let t = build_sieve(100).unwrap();
        assert_eq!(t.prime_count_at_sqrt(100).unwrap(), 4);
        assert_eq!(t.prime_count_at_sqrt(48).unwrap(), 3);
        assert_eq!(t.prime_count_at_sqrt(49).unwrap(), 4);
        assert_eq!(t.prime_count_at_sqrt(3).unwrap(), 0);
        assert_eq!(t.prime_count_at_sqrt(4).unwrap(), 1);
        assert_eq!(t.prime_count_at_sqrt(10_200).unwrap(), 25);
        assert!(t.prime_count_at_sqrt(101 * 101).is_err());
        assert!(t.prime_count_at_sqrt(0).is_err());
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let limit = 100_000;
        let t = build_sieve(limit).unwrap();
        let mut count = 0;
        for n in 2..=limit {
            assert_eq!(t.least_prime_factor(n).unwrap(), trial_lpf(n), "lpf({n})");
            if trial_is_prime(n) {
                count += 1;
            }
            assert_eq!(t.prime_count(n).unwrap(), count, "π({n})");
            let f = t.factorize(n).unwrap();
            assert_eq!(f.product(), n as u128);
            assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn sqrt_count_matches_isqrt_route() {
        let t = build_sieve(2_000).unwrap();
        for n in 1..=4_000_000u64 {
            if n % 997 != 0 && n > 20_000 {
                continue;
            }
            assert_eq!(
                t.prime_count_at_sqrt(n).unwrap(),
                t.prime_count(n.isqrt()).unwrap()
            );
        }
    }

    #[test]
    fn gcd_examples() {
        let g = |a: u64, b: u64| gcd(&BigUint::from(a), &BigUint::from(b));
        assert_eq!(g(17, 257), BigUint::from(1u32));
        assert_eq!(g(0, 12), BigUint::from(12u32));
        assert_eq!(g(1024 * 3, 16 * 7), BigUint::from(16u32));
    }

    #[test]
    fn is_prime_examples() {
        let p = |n: u64| is_prime(&BigUint::from(n)).unwrap();
        assert!(p(65537).prime);
        assert!(!p(1).prime);
        assert!(!p(0).prime);
        assert!(!p(4294967297).prime);
        assert!(!p(4294967297).probabilistic);
        assert!(p((1 << 61) - 1).prime);
        assert!(!p((1 << 61) - 1).probabilistic);
    }

    #[test]
    fn is_prime_big_operands() {
        let m89 = (BigUint::one() << 89u32) - BigUint::one();
        let r = is_prime(&m89).unwrap();
        assert!(r.prime && r.probabilistic);
        let m67 = (BigUint::one() << 67u32) - BigUint::one();
        let r = is_prime(&m67).unwrap();
        assert!(!r.prime && !r.probabilistic);
        // F6 = 274177 · 67280421310721
        let f6 = (BigUint::one() << 64u32) + BigUint::one();
        assert!(!is_prime(&f6).unwrap().prime);
        let huge = BigUint::one() << (MAX_PRIMALITY_BITS as u32 + 1);
        assert!(matches!(is_prime(&huge), Err(PlpError::Domain(_))));
    }

    #[test]
    fn u64_primality_matches_sieve() {
        let t = build_sieve(200_000).unwrap();
        for n in 0..=200_000u64 {
            let expected = n >= 2 && t.is_prime(n).unwrap();
            assert_eq!(is_prime_u64(n), expected, "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [3215031751u64, 2152302898747, 3474749660383, 341550071728321] {
            assert!(!is_prime_u64(n));
        }
    }

    #[test]
    fn rs_bound_examples() {
        let b100 = rs_upper_bound(100).unwrap();
        assert!((b100 - 28.788).abs() < 1e-3);
        let b2 = rs_upper_bound(2).unwrap();
        assert!((b2 - 9.13).abs() < 1e-2);
        let t = build_sieve(1_000_000).unwrap();
        assert_eq!(t.prime_count(1_000_000).unwrap(), 78498);
        assert!(rs_upper_bound(1_000_000).unwrap() > 78498.0);
        assert!(rs_upper_bound(1).is_err());
        assert!(rs_upper_bound(0).is_err());
    }

    #[test]
    fn rs_bound_exceeds_prime_count() {
        let t = build_sieve(100_000).unwrap();
        for n in 2..=100_000 {
            assert!((t.prime_count(n).unwrap() as f64) < rs_upper_bound(n).unwrap());
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn gcd_matches_factorization(a in 1u64..=1_000_000, b in 1u64..=1_000_000) {
            use std::sync::OnceLock;
            static SIEVE: OnceLock<SieveTables> = OnceLock::new();
            let t = SIEVE.get_or_init(|| build_sieve(1_000_000).unwrap());
            let fa = t.factorize(a).unwrap();
            let fb = t.factorize(b).unwrap();
            let mut expected = 1u64;
            for &(p, ea) in &fa.factors {
                if let Some(&(_, eb)) = fb.factors.iter().find(|&&(q, _)| q == p) {
                    expected *= p.pow(ea.min(eb));
                }
            }
            prop_assert_eq!(gcd(&BigUint::from(a), &BigUint::from(b)), BigUint::from(expected));
        }
    }
}
