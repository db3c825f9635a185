//! Prime-existence checkers for PLP sequences.
//!
//! Every check rests on one fact: a composite `a` with least prime factor
//! `p` satisfies `a ≥ p²`, and pairwise coprime terms have distinct least
//! prime factors. Each checker returns a [`Certificate`] whose inequalities
//! are decided with interval arithmetic only.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{PlpError, Result};
use crate::interval::{sub_down, IntervalValue};
use crate::plp::{reciprocal_sum, reciprocal_sum_of, PlpSequence};
use crate::sieve::{is_prime, rs_upper_bound_at_sqrt, SieveTables};
use crate::zeta::p_constant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    ReciprocalBound,
    Decomposition,
    LowOmegaWitness,
    PrimeWitness,
}

impl CertificateKind {
    /// The proposition identifier accepted by `plp certify --prop`.
    pub fn proposition(self) -> &'static str {
        match self {
            CertificateKind::ReciprocalBound => "3.1",
            CertificateKind::Decomposition => "3.2",
            CertificateKind::LowOmegaWitness => "3.3",
            CertificateKind::PrimeWitness => "3.4",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::ReciprocalBound => "reciprocal_bound",
            CertificateKind::Decomposition => "decomposition",
            CertificateKind::LowOmegaWitness => "low_omega_witness",
            CertificateKind::PrimeWitness => "prime_witness",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Some term was classified prime by a strong-probable-prime test.
    Probabilistic,
}

fn decimal<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub index: usize,
    #[serde(serialize_with = "decimal")]
    pub term: BigUint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<u32>,
}

/// One link of the chain `1/a ≤ 1/lpf(a)²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LpfLink {
    pub term: u64,
    pub lpf: u64,
}

/// Term-count thresholds above which a PLP set of terms `≤ n` must contain
/// a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub n: u64,
    /// `π(√n) + 1`.
    pub exact: u64,
    /// `⌊2√n/ln n · (1 + 3/ln n)⌋ + 1`.
    pub rs: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Exact,
    Rs,
}

impl DensityMode {
    pub fn required(self, t: &ThresholdPair) -> u64 {
        match self {
            DensityMode::Exact => t.exact,
            DensityMode::Rs => t.rs,
        }
    }
}

/// Outcome of a check. Absent fields do not apply to the certificate kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum: Option<IntervalValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<IntervalValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_sum: Option<IntervalValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub composite_sum: Option<IntervalValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdPair>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<DensityMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    /// Certified lower bound on `bound - sum` (or `sum - bound` for the
    /// low-Ω hypothesis).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lpf_chain: Option<Vec<LpfLink>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<Flag>,
}

impl Certificate {
    fn empty(kind: CertificateKind, verdict: Verdict) -> Self {
        Certificate {
            kind,
            verdict,
            sum: None,
            bound: None,
            prime_sum: None,
            composite_sum: None,
            witness: None,
            thresholds: None,
            mode: None,
            count: None,
            s: None,
            margin: None,
            lpf_chain: None,
            flags: Vec::new(),
        }
    }

    pub fn is_probabilistic(&self) -> bool {
        self.flags.contains(&Flag::Probabilistic)
    }

    /// Re-derives a pass certificate's inequalities from its own payload,
    /// using trial division and fresh interval sums. Returns `false` for
    /// anything that is not a reproducible pass.
    pub fn recheck(&self) -> bool {
        if self.verdict != Verdict::Pass {
            return false;
        }
        match self.kind {
            CertificateKind::ReciprocalBound => self.recheck_reciprocal_bound(),
            CertificateKind::Decomposition => match (self.composite_sum, self.bound) {
                (Some(c), Some(b)) => c.hi <= b.hi,
                _ => false,
            },
            CertificateKind::LowOmegaWitness => {
                let (Some(sum), Some(bound), Some(w), Some(s)) =
                    (self.sum, self.bound, &self.witness, self.s)
                else {
                    return false;
                };
                let Some(term) = w.term.to_u64() else {
                    return false;
                };
                sum.lo > bound.hi && trial_big_omega(term) < s
            }
            CertificateKind::PrimeWitness => {
                let (Some(w), Some(th), Some(mode), Some(count)) =
                    (&self.witness, self.thresholds, self.mode, self.count)
                else {
                    return false;
                };
                let Some(term) = w.term.to_u64() else {
                    return false;
                };
                count as u64 >= mode.required(&th) && term <= th.n && trial_is_prime(term)
            }
        }
    }

    fn recheck_reciprocal_bound(&self) -> bool {
        let (Some(chain), Some(sum), Some(bound)) = (&self.lpf_chain, self.sum, self.bound) else {
            return false;
        };
        let mut seen = HashSet::new();
        for link in chain {
            let ok = trial_is_prime(link.lpf)
                && link.lpf < link.term
                && link.term % link.lpf == 0
                && (link.lpf as u128) * (link.lpf as u128) <= link.term as u128
                && seen.insert(link.lpf);
            if !ok {
                return false;
            }
        }
        let terms: Vec<BigUint> = chain.iter().map(|l| BigUint::from(l.term)).collect();
        let fresh = reciprocal_sum_of(&terms);
        fresh.hi <= sum.hi && fresh.hi <= bound.lo
    }
}

fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn trial_big_omega(mut n: u64) -> u32 {
    let mut count = 0;
    let mut d = 2u64;
    while d * d <= n {
        while n % d == 0 {
            n /= d;
            count += 1;
        }
        d += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

fn term_within_sieve(term: &BigUint, t: &SieveTables) -> Result<u64> {
    term.to_u64()
        .filter(|&v| v <= t.limit())
        .ok_or_else(|| PlpError::Domain(format!("term {term} exceeds sieve limit {}", t.limit())))
}

/// Certifies `Σ 1/aᵢ ≤ P(2)` for an all-composite PLP sequence.
pub fn check_composite_reciprocal_bound(seq: &PlpSequence, t: &SieveTables) -> Result<Certificate> {
    let mut chain = Vec::with_capacity(seq.len());
    let mut seen = HashSet::with_capacity(seq.len());
    for term in seq.terms() {
        let a = term_within_sieve(term, t)?;
        let p = t.least_prime_factor(a)?;
        if p == a {
            return Err(PlpError::NotAllComposite { term: term.clone() });
        }
        if (p as u128) * (p as u128) > a as u128 {
            return Err(PlpError::Internal(format!("composite {a} has lpf {p} with p² > a")));
        }
        if !seen.insert(p) {
            return Err(PlpError::Internal(format!(
                "least prime factor {p} repeats in a pairwise coprime sequence"
            )));
        }
        chain.push(LpfLink { term: a, lpf: p });
    }
    let sum = reciprocal_sum(seq);
    let bound = p_constant(2, t)?;
    if !sum.certainly_le(&bound) {
        return Err(PlpError::Internal(format!(
            "reciprocal sum {sum} not certified below P(2) = {bound}"
        )));
    }
    let mut cert = Certificate::empty(CertificateKind::ReciprocalBound, Verdict::Pass);
    cert.sum = Some(sum);
    cert.bound = Some(bound);
    cert.margin = Some(sub_down(bound.lo, sum.hi));
    cert.count = Some(seq.len());
    cert.lpf_chain = Some(chain);
    Ok(cert)
}

struct Classification {
    prime: bool,
    probabilistic: bool,
}

fn classify(term: &BigUint, t: &SieveTables) -> Result<Classification> {
    if let Some(v) = term.to_u64().filter(|&v| v <= t.limit()) {
        return Ok(Classification {
            prime: t.is_prime(v)?,
            probabilistic: false,
        });
    }
    let p = is_prime(term)?;
    Ok(Classification {
        prime: p.prime,
        probabilistic: p.probabilistic,
    })
}

/// Splits `Σ 1/aᵢ` into its prime and composite parts; passes when the
/// composite part stays within `P(2)`.
pub fn decompose_reciprocal_sum(seq: &PlpSequence, t: &SieveTables) -> Result<Certificate> {
    let mut primes = Vec::new();
    let mut composites = Vec::new();
    let mut probabilistic = false;
    for term in seq.terms() {
        let c = classify(term, t)?;
        probabilistic |= c.probabilistic;
        if c.prime {
            primes.push(term.clone());
        } else {
            composites.push(term.clone());
        }
    }
    let prime_sum = reciprocal_sum_of(&primes);
    let composite_sum = reciprocal_sum_of(&composites);
    let bound = p_constant(2, t)?;
    let verdict = if composite_sum.hi <= bound.hi {
        Verdict::Pass
    } else if composite_sum.lo > bound.hi {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    let mut cert = Certificate::empty(CertificateKind::Decomposition, verdict);
    cert.sum = Some(reciprocal_sum(seq));
    cert.prime_sum = Some(prime_sum);
    cert.composite_sum = Some(composite_sum);
    cert.bound = Some(bound);
    cert.count = Some(seq.len());
    if verdict == Verdict::Fail {
        // the composite term with the largest reciprocal
        cert.witness = composites.iter().enumerate().min_by_key(|(_, c)| *c).map(|(_, c)| {
            Witness {
                index: seq.terms().iter().position(|x| x == c).unwrap_or(0),
                term: c.clone(),
                omega: None,
            }
        });
    }
    if probabilistic {
        cert.flags.push(Flag::Probabilistic);
    }
    Ok(cert)
}

/// Given `Σ 1/aᵢ > P(s)`, finds the first term with at most `s - 1` prime
/// factors counted with multiplicity.
pub fn low_omega_witness(seq: &PlpSequence, s: u32, t: &SieveTables) -> Result<Certificate> {
    if s < 2 {
        return Err(PlpError::Domain(format!("s must be ≥ 2, got {s}")));
    }
    let terms = seq
        .terms()
        .iter()
        .map(|term| term_within_sieve(term, t))
        .collect::<Result<Vec<u64>>>()?;
    let sum = reciprocal_sum(seq);
    let bound = p_constant(s, t)?;
    if sum.hi <= bound.lo {
        return Err(PlpError::Precondition(format!(
            "Σ 1/a = {sum} does not exceed P({s}) = {bound}"
        )));
    }
    let mut cert = Certificate::empty(CertificateKind::LowOmegaWitness, Verdict::Inconclusive);
    cert.sum = Some(sum);
    cert.bound = Some(bound);
    cert.s = Some(s);
    cert.count = Some(seq.len());
    if !bound.certainly_lt(&sum) {
        return Ok(cert);
    }
    for (index, &a) in terms.iter().enumerate() {
        let omega = t.factorize(a)?.big_omega();
        if omega < s {
            cert.verdict = Verdict::Pass;
            cert.margin = Some(sub_down(sum.lo, bound.hi));
            cert.witness = Some(Witness {
                index,
                term: BigUint::from(a),
                omega: Some(omega),
            });
            return Ok(cert);
        }
    }
    Err(PlpError::Internal(format!(
        "Σ 1/a > P({s}) certified but every term has Ω ≥ {s}"
    )))
}

pub fn compute_thresholds(n: u64, t: &SieveTables) -> Result<ThresholdPair> {
    if n < 2 {
        return Err(PlpError::Domain(format!("threshold requires n ≥ 2, got {n}")));
    }
    let exact = t.prime_count_at_sqrt(n)? + 1;
    let rs = rs_upper_bound_at_sqrt(n)?.floor() as u64 + 1;
    if exact > rs {
        return Err(PlpError::Internal(format!(
            "π(√{n}) + 1 = {exact} exceeds the explicit threshold {rs}"
        )));
    }
    Ok(ThresholdPair { n, exact, rs })
}

/// A PLP set of at least the threshold number of terms `≤ n` contains a
/// prime; returns the first one.
pub fn prime_witness_by_density(
    seq: &PlpSequence,
    n: u64,
    t: &SieveTables,
    mode: DensityMode,
) -> Result<Certificate> {
    let bound = BigUint::from(n);
    if let Some(term) = seq.terms().iter().find(|&x| *x > bound) {
        return Err(PlpError::Domain(format!("term {term} exceeds n = {n}")));
    }
    let thresholds = compute_thresholds(n, t)?;
    let required = mode.required(&thresholds);
    if (seq.len() as u64) < required {
        return Err(PlpError::BelowThreshold {
            len: seq.len(),
            required,
            thresholds,
        });
    }
    for (index, term) in seq.terms().iter().enumerate() {
        if classify(term, t)?.prime {
            let mut cert = Certificate::empty(CertificateKind::PrimeWitness, Verdict::Pass);
            cert.witness = Some(Witness {
                index,
                term: term.clone(),
                omega: None,
            });
            cert.thresholds = Some(thresholds);
            cert.mode = Some(mode);
            cert.count = Some(seq.len());
            return Ok(cert);
        }
    }
    Err(PlpError::Internal(format!(
        "{} pairwise coprime composites ≤ {n} exceed π(√n) = {}",
        seq.len(),
        thresholds.exact - 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::build_sieve;
    use num_rational::BigRational;
    use std::sync::OnceLock;

    fn sieve() -> &'static SieveTables {
        static T: OnceLock<SieveTables> = OnceLock::new();
        T.get_or_init(|| build_sieve(1_000_000).unwrap())
    }

    fn seq(v: &[u64]) -> PlpSequence {
        PlpSequence::from_u64s(v).unwrap()
    }

    fn rational_sum(v: &[u64]) -> f64 {
        use num_traits::ToPrimitive;
        v.iter()
            .map(|&d| BigRational::new(1.into(), d.into()))
            .fold(BigRational::from_integer(0.into()), |a, b| a + b)
            .to_f64()
            .unwrap()
    }

    #[test]
    fn reciprocal_bound_examples() {
        let t = sieve();
        let c = check_composite_reciprocal_bound(&seq(&[4, 9, 25, 49]), t).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert!((c.sum.unwrap().midpoint() - 0.42152).abs() < 1e-5);
        assert!(c.sum.unwrap().hi <= c.bound.unwrap().lo);
        assert!(c.recheck());

        let c = check_composite_reciprocal_bound(&seq(&[6, 25, 49]), t).unwrap();
        assert!((c.sum.unwrap().midpoint() - rational_sum(&[6, 25, 49])).abs() < 1e-12);
        assert!((rational_sum(&[6, 25, 49]) - 0.22707).abs() < 1e-5);
        let lpfs: Vec<u64> = c.lpf_chain.as_ref().unwrap().iter().map(|l| l.lpf).collect();
        assert_eq!(lpfs, vec![2, 5, 7]);

        match check_composite_reciprocal_bound(&seq(&[4, 5, 9]), t) {
            Err(PlpError::NotAllComposite { term }) => assert_eq!(term, BigUint::from(5u32)),
            other => panic!("{other:?}"),
        }
        let small = build_sieve(30).unwrap();
        assert!(matches!(
            check_composite_reciprocal_bound(&seq(&[4, 49]), &small),
            Err(PlpError::Domain(_))
        ));
    }

    #[test]
    fn recheck_rejects_tampering() {
        let t = sieve();
        let mut c = check_composite_reciprocal_bound(&seq(&[4, 9, 25, 49]), t).unwrap();
        c.lpf_chain.as_mut().unwrap()[1].lpf = 2;
        assert!(!c.recheck());
    }

    #[test]
    fn decomposition_examples() {
        let t = sieve();
        let c = decompose_reciprocal_sum(&seq(&[4, 5, 7, 9, 11]), t).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert!((c.prime_sum.unwrap().midpoint() - 0.433766).abs() < 1e-6);
        assert!((c.composite_sum.unwrap().midpoint() - 0.361111).abs() < 1e-6);
        assert!(c.recheck());

        let c = decompose_reciprocal_sum(&seq(&[2, 3, 5]), t).unwrap();
        assert_eq!(c.composite_sum.unwrap(), IntervalValue::ZERO);
        assert_eq!(c.verdict, Verdict::Pass);

        let c = decompose_reciprocal_sum(&seq(&[4, 9, 25, 49]), t).unwrap();
        assert_eq!(c.prime_sum.unwrap(), IntervalValue::ZERO);
        assert!((c.composite_sum.unwrap().midpoint() - 0.421519).abs() < 1e-6);
    }

    #[test]
    fn decomposition_parts_enclose_whole() {
        let t = sieve();
        let c = decompose_reciprocal_sum(&seq(&[4, 5, 7, 9, 11, 13, 17, 437]), t).unwrap();
        let parts = c.prime_sum.unwrap().add(&c.composite_sum.unwrap());
        assert!(parts.intersects(&c.sum.unwrap()));
        assert!(parts.contains(c.sum.unwrap().midpoint()));
    }

    #[test]
    fn decomposition_flags_probable_primes() {
        use crate::plp::{generate, GenerateParams, GeneratorKind};
        let t = sieve();
        // 2^89 - 1 is prime and beyond 64 bits
        let m = generate(GeneratorKind::MersennePrimeExponent, &GenerateParams::count(24), None)
            .unwrap();
        let c = decompose_reciprocal_sum(&m, t).unwrap();
        assert!(c.is_probabilistic());
        assert_eq!(c.verdict, Verdict::Pass);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["flags"][0], "probabilistic");
    }

    #[test]
    fn low_omega_examples() {
        let t = sieve();
        let c = low_omega_witness(&seq(&[2, 9, 25]), 2, t).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        let w = c.witness.as_ref().unwrap();
        assert_eq!((w.index, w.term.clone(), w.omega), (0, BigUint::from(2u32), Some(1)));
        assert!((c.sum.unwrap().midpoint() - 0.6511).abs() < 1e-4);
        assert!(c.recheck());

        let c = low_omega_witness(&seq(&[4, 9, 25]), 3, t).unwrap();
        let w = c.witness.as_ref().unwrap();
        assert_eq!((w.term.clone(), w.omega), (BigUint::from(4u32), Some(2)));
        assert!((c.sum.unwrap().midpoint() - 0.40111).abs() < 1e-5);

        assert!(matches!(
            low_omega_witness(&seq(&[4, 9, 25, 49]), 2, t),
            Err(PlpError::Precondition(_))
        ));
        assert!(matches!(low_omega_witness(&seq(&[2]), 1, t), Err(PlpError::Domain(_))));
    }

    #[test]
    fn threshold_examples() {
        let t = sieve();
        let th = compute_thresholds(100, t).unwrap();
        assert_eq!((th.exact, th.rs), (5, 8));
        assert_eq!(compute_thresholds(4, t).unwrap().exact, 2);
        let th = compute_thresholds(1_000_000, t).unwrap();
        assert_eq!(th.exact, 169);
        assert!((177..=179).contains(&th.rs), "rs = {}", th.rs);
        assert!(compute_thresholds(1, t).is_err());
    }

    #[test]
    fn prime_witness_examples() {
        let t = sieve();
        let c = prime_witness_by_density(&seq(&[4, 9, 11, 25, 49]), 100, t, DensityMode::Exact)
            .unwrap();
        assert_eq!(c.witness.as_ref().unwrap().term, BigUint::from(11u32));
        assert!(c.recheck());

        match prime_witness_by_density(&seq(&[4, 9, 25, 49]), 100, t, DensityMode::Exact) {
            Err(PlpError::BelowThreshold { len, required, thresholds }) => {
                assert_eq!((len, required, thresholds.exact, thresholds.rs), (4, 5, 5, 8));
            }
            other => panic!("{other:?}"),
        }

        let c = prime_witness_by_density(&seq(&[2]), 2, t, DensityMode::Exact).unwrap();
        assert_eq!(c.witness.as_ref().unwrap().term, BigUint::from(2u32));

        assert!(matches!(
            prime_witness_by_density(&seq(&[4, 101]), 100, t, DensityMode::Exact),
            Err(PlpError::Domain(_))
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let t = sieve();
        let c = prime_witness_by_density(&seq(&[4, 9, 11, 25, 49]), 100, t, DensityMode::Rs);
        assert!(c.is_err());
        let c = prime_witness_by_density(
            &seq(&[2, 3, 5, 7, 11, 13, 17, 19]),
            100,
            t,
            DensityMode::Rs,
        )
        .unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["kind"], "prime_witness");
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["witness"]["term"], "2");
        assert_eq!(v["thresholds"]["exact"], 5);
        assert_eq!(v["thresholds"]["rs"], 8);
        assert!(v.get("sum").is_none());
        assert!(v.get("flags").is_none());
    }
}
