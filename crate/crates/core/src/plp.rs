//! The PLP sequence model: validation, generators and reciprocal sums.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PlpError, Result};
use crate::interval::{u64_enclosure, DirectedSum, IntervalValue};
use crate::sieve::{gcd, is_prime_u64, SieveTables};

/// Terms of a strictly increasing, pairwise coprime sequence of naturals
/// greater than one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlpSequence {
    terms: Vec<BigUint>,
}

impl PlpSequence {
    /// Validates `terms`; the error carries the first few violations.
    pub fn new(terms: Vec<BigUint>) -> Result<Self> {
        let report = validate_plp(&terms);
        if !report.valid {
            return Err(PlpError::InvalidSequence(report.summary()));
        }
        Ok(PlpSequence { terms })
    }

    pub fn from_u64s(terms: &[u64]) -> Result<Self> {
        Self::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub(crate) fn from_valid(terms: Vec<BigUint>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0] < w[1]));
        PlpSequence { terms }
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<BigUint> {
        self.terms
    }

    /// Terms as `u64`, or a domain error naming the first oversized term.
    pub fn terms_u64(&self) -> Result<Vec<u64>> {
        self.terms
            .iter()
            .map(|t| {
                t.to_u64()
                    .ok_or_else(|| PlpError::Domain(format!("term {t} exceeds 64 bits")))
            })
            .collect()
    }
}

impl Serialize for PlpSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SequenceDoc::from_terms(&self.terms).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PlpSequence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SequenceDoc::deserialize(d)?;
        let terms = doc.parse_terms().map_err(serde::de::Error::custom)?;
        PlpSequence::new(terms).map_err(serde::de::Error::custom)
    }
}

/// On-disk form: `{"terms": ["3", "5", "17"]}`. Integers are accepted on
/// input; output always uses decimal strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub terms: Vec<TermRepr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TermRepr {
    Decimal(String),
    Integer(u64),
}

impl SequenceDoc {
    pub fn from_terms(terms: &[BigUint]) -> Self {
        SequenceDoc {
            terms: terms.iter().map(|t| TermRepr::Decimal(t.to_string())).collect(),
        }
    }

    pub fn parse_terms(&self) -> Result<Vec<BigUint>> {
        self.terms
            .iter()
            .map(|t| match t {
                TermRepr::Integer(n) => Ok(BigUint::from(*n)),
                TermRepr::Decimal(s) => BigUint::from_str(s.trim())
                    .map_err(|_| PlpError::Parse(format!("term {s:?} is not a decimal natural"))),
            })
            .collect()
    }
}

/// Reads a sequence document without validating it.
pub fn read_terms_json<R: Read>(reader: R) -> Result<Vec<BigUint>> {
    let doc: SequenceDoc = serde_json::from_reader(reader)?;
    doc.parse_terms()
}

pub fn write_json<W: Write>(seq: &PlpSequence, mut out: W) -> Result<()> {
    serde_json::to_writer(&mut out, seq)?;
    writeln!(out)?;
    Ok(())
}

/// One decimal term per line.
pub fn write_csv<W: Write>(seq: &PlpSequence, mut out: W) -> Result<()> {
    for t in &seq.terms {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    TermLeOne,
    NotIncreasing,
    CommonFactor,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// `(i, i)` for single-term violations.
    pub indices: (usize, usize),
    /// The offending term, or the gcd for `common_factor`.
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn summary(&self) -> String {
        let mut parts: Vec<String> = self
            .violations
            .iter()
            .take(3)
            .map(|v| format!("{:?} at {:?} ({})", v.kind, v.indices, v.detail))
            .collect();
        if self.violations.len() > 3 {
            parts.push(format!("and {} more", self.violations.len() - 3));
        }
        parts.join("; ")
    }
}

/// Checks every term, every adjacent pair for increase, and every pair for
/// coprimality.
pub fn validate_plp(terms: &[BigUint]) -> ValidationReport {
    let one = BigUint::one();
    let mut violations = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if *t <= one {
            violations.push(Violation {
                kind: ViolationKind::TermLeOne,
                indices: (i, i),
                detail: t.to_string(),
            });
        }
        if i > 0 && terms[i - 1] >= *t {
            violations.push(Violation {
                kind: ViolationKind::NotIncreasing,
                indices: (i - 1, i),
                detail: t.to_string(),
            });
        }
    }
    let small: Vec<Option<u64>> = terms.iter().map(|t| t.to_u64()).collect();
    for i in 0..terms.len() {
        for j in i + 1..terms.len() {
            if let (Some(a), Some(b)) = (small[i], small[j]) {
                if num_integer::gcd(a, b) == 1 {
                    continue;
                }
            }
            let g = gcd(&terms[i], &terms[j]);
            if g != one {
                violations.push(Violation {
                    kind: ViolationKind::CommonFactor,
                    indices: (i, j),
                    detail: g.to_string(),
                });
            }
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    /// `2^(2^n) + 1`, `n = 0, 1, ...`
    Fermat,
    /// `2^p - 1` over the primes `p = 2, 3, 5, ...`
    MersennePrimeExponent,
    /// Fibonacci `F_p` over primes `p ≥ 3`.
    FibonacciPrimeIndex,
    /// `p²` over the primes.
    PrimeSquares,
    /// `a₁ = 2`, `a_{k+1} = a_k² - a_k + 1`.
    Sylvester,
    /// Seeded uniform draws in `[2, range]`, kept when coprime to all kept
    /// draws, then sorted.
    RandomGreedy,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::Fermat,
        GeneratorKind::MersennePrimeExponent,
        GeneratorKind::FibonacciPrimeIndex,
        GeneratorKind::PrimeSquares,
        GeneratorKind::Sylvester,
        GeneratorKind::RandomGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Fermat => "fermat",
            GeneratorKind::MersennePrimeExponent => "mersenne_prime_exponent",
            GeneratorKind::FibonacciPrimeIndex => "fibonacci_prime_index",
            GeneratorKind::PrimeSquares => "prime_squares",
            GeneratorKind::Sylvester => "sylvester",
            GeneratorKind::RandomGreedy => "random_greedy",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = PlpError;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| PlpError::Usage(format!("unknown generator kind {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenerateParams {
    pub count: usize,
    pub seed: Option<u64>,
    pub range_hint: Option<u64>,
}

impl GenerateParams {
    pub fn count(count: usize) -> Self {
        GenerateParams {
            count,
            ..Default::default()
        }
    }
}

// Doubly exponential families; beyond these counts the terms stop fitting
// in memory.
const MAX_FERMAT_COUNT: usize = 24;
const MAX_SYLVESTER_COUNT: usize = 28;
const MAX_MERSENNE_COUNT: usize = 10_000;
const MAX_FIBONACCI_COUNT: usize = 2_000;

pub fn generate(
    kind: GeneratorKind,
    params: &GenerateParams,
    t: Option<&SieveTables>,
) -> Result<PlpSequence> {
    let count = params.count;
    if count == 0 {
        return Err(PlpError::Usage("count must be ≥ 1".into()));
    }
    let terms = match kind {
        GeneratorKind::Fermat => {
            cap(kind, count, MAX_FERMAT_COUNT)?;
            (0..count as u32)
                .map(|n| (BigUint::one() << (1u64 << n)) + BigUint::one())
                .collect()
        }
        GeneratorKind::MersennePrimeExponent => {
            cap(kind, count, MAX_MERSENNE_COUNT)?;
            first_primes(count, 2)
                .map(|p| (BigUint::one() << p) - BigUint::one())
                .collect()
        }
        GeneratorKind::FibonacciPrimeIndex => {
            cap(kind, count, MAX_FIBONACCI_COUNT)?;
            let indices: Vec<u64> = first_primes(count, 3).collect();
            fibonacci_at(&indices)
        }
        GeneratorKind::PrimeSquares => {
            let t = t.ok_or_else(|| {
                PlpError::Usage("prime_squares requires sieve tables".into())
            })?;
            if t.primes().len() < count {
                return Err(PlpError::Generation(format!(
                    "sieve limit {} holds {} primes, {count} requested",
                    t.limit(),
                    t.primes().len()
                )));
            }
            t.primes()[..count]
                .iter()
                .map(|&p| BigUint::from(p as u64 * p as u64))
                .collect()
        }
        GeneratorKind::Sylvester => {
            cap(kind, count, MAX_SYLVESTER_COUNT)?;
            let mut out: Vec<BigUint> = Vec::with_capacity(count);
            let mut a = BigUint::from(2u32);
            for _ in 0..count {
                let next = &a * &a - &a + BigUint::one();
                out.push(std::mem::replace(&mut a, next));
            }
            out
        }
        GeneratorKind::RandomGreedy => {
            let seed = params
                .seed
                .ok_or_else(|| PlpError::Usage("random_greedy requires a seed".into()))?;
            let range = params
                .range_hint
                .ok_or_else(|| PlpError::Usage("random_greedy requires a range hint".into()))?;
            random_greedy(count, seed, range)?
                .into_iter()
                .map(BigUint::from)
                .collect()
        }
    };
    Ok(PlpSequence::from_valid(terms))
}

fn cap(kind: GeneratorKind, count: usize, max: usize) -> Result<()> {
    if count > max {
        return Err(PlpError::Generation(format!(
            "{kind} supports at most {max} terms, {count} requested"
        )));
    }
    Ok(())
}

fn first_primes(count: usize, from: u64) -> impl Iterator<Item = u64> {
    (from..).filter(|&n| is_prime_u64(n)).take(count)
}

/// Fibonacci numbers at ascending indices, by a single forward pass.
fn fibonacci_at(indices: &[u64]) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(indices.len());
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    let mut at = 0u64;
    for &idx in indices {
        while at < idx {
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
            at += 1;
        }
        out.push(a.clone());
    }
    out
}

fn random_greedy(count: usize, seed: u64, range: u64) -> Result<Vec<u64>> {
    if range < 2 {
        return Err(PlpError::Usage(format!("range hint must be ≥ 2, got {range}")));
    }
    if count as u64 > range - 1 {
        return Err(PlpError::Generation(format!(
            "{count} pairwise coprime terms cannot fit in [2, {range}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = (count as u64).saturating_mul(1000).saturating_add(range.saturating_mul(10));
    let mut kept: Vec<u64> = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while kept.len() < count {
        if attempts >= budget {
            return Err(PlpError::Generation(format!(
                "random_greedy found {} of {count} coprime terms in [2, {range}] \
                 after {attempts} draws",
                kept.len()
            )));
        }
        attempts += 1;
        let x = rng.gen_range(2..=range);
        if kept.iter().all(|&k| k.gcd(&x) == 1) {
            kept.push(x);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

/// Enclosure of `1/n` for an arbitrary-precision `n ≥ 1`.
pub fn reciprocal_enclosure(n: &BigUint) -> IntervalValue {
    let bits = n.bits();
    if let Some(small) = n.to_u64() {
        let (lo, hi) = u64_enclosure(small);
        return IntervalValue::new(lo, hi).recip();
    }
    if bits <= 1000 {
        // to_f64 is within one ulp of n
        let f = n.to_f64().expect("finite below 2^1000");
        let around = IntervalValue::new(f.next_down(), f.next_up());
        return around.recip();
    }
    // n ≥ 2^(bits-1)
    let hi = if bits - 1 <= 1074 {
        2f64.powi(-((bits - 1) as i32))
    } else {
        f64::from_bits(1)
    };
    IntervalValue::new(0.0, hi)
}

/// `Σ 1/term` with outward rounding.
pub fn reciprocal_sum(seq: &PlpSequence) -> IntervalValue {
    reciprocal_sum_of(seq.terms())
}

pub fn reciprocal_sum_of(terms: &[BigUint]) -> IntervalValue {
    terms
        .iter()
        .map(reciprocal_enclosure)
        .collect::<DirectedSum>()
        .value()
}
