//! Pairwise relatively prime (PLP) sequences made executable.
//!
//! A PLP sequence is a strictly increasing sequence of naturals greater than
//! one whose terms are pairwise coprime. Such a sequence can only contain
//! composites if it is sparse: each composite term `a` has a least prime
//! factor `p` with `p² ≤ a`, and coprimality forces those least prime
//! factors to be distinct. This crate turns that observation into checkers
//! that emit machine-checkable [`Certificate`]s.
//!
//! - [`sieve`]: least-prime-factor sieve, `π(x)`, factorization, primality.
//! - [`interval`]: outward-rounded `f64` intervals and compensated sums.
//! - [`zeta`]: certified enclosures of `ζ(s)` and the prime zeta `P(s)`.
//! - [`plp`]: the sequence model, validator, generators and reciprocal sums.
//! - [`certify`]: the prime-existence checkers.
//! - [`oracle`]: brute-force extremal composite PLP sets for small `n`.
//! - [`cli`]: the `plp` command-line tool.

pub mod certify;
pub mod cli;
pub mod error;
pub mod interval;
pub mod oracle;
pub mod plp;
pub mod sieve;
pub mod zeta;

pub use certify::{
    check_composite_reciprocal_bound, compute_thresholds, decompose_reciprocal_sum,
    low_omega_witness, prime_witness_by_density, Certificate, CertificateKind, DensityMode,
    ThresholdPair, Verdict,
};
pub use error::{PlpError, Result};
pub use interval::IntervalValue;
pub use oracle::{max_composite_plp_size, max_composite_reciprocal_sum, ExtremalResult, Oracle};
pub use plp::{
    generate, reciprocal_sum, validate_plp, GenerateParams, GeneratorKind, PlpSequence,
    ValidationReport,
};
pub use sieve::{build_sieve, gcd, is_prime, rs_upper_bound, Factorization, Primality, SieveTables};
pub use zeta::{p_constant, prime_zeta_direct, prime_zeta_mobius, zeta_real};
