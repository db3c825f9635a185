//! C ABI over `plp-core`.
//!
//! Sieve tables and sequences are opaque heap handles owned by the caller
//! and released with their `_free` function. Every fallible call returns a
//! [`PlpStatus`]; on anything other than `PLP_STATUS_OK` a description is
//! available from [`plp_last_error_message`] on the same thread. Structured
//! results (certificates, reports, oracle output) come back as JSON strings
//! that must be released with [`plp_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigUint;
use plp_core::certify::{self, Certificate};
use plp_core::oracle;
use plp_core::plp::{self, GenerateParams, GeneratorKind};
use plp_core::{zeta, DensityMode, IntervalValue, PlpError, SieveTables, Verdict};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Precision = 5,
    Config = 6,
    Usage = 7,
    Generation = 8,
    NotAllComposite = 9,
    Precondition = 10,
    BelowThreshold = 11,
    InvalidSequence = 12,
    Internal = 13,
    Io = 14,
    Panic = 15,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlpVerdict {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlpDensityMode {
    Exact = 0,
    Rs = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PlpThresholds {
    pub n: u64,
    pub exact: u64,
    pub rs: u64,
}

/// Opaque least-prime-factor tables.
pub struct PlpSieve(SieveTables);

/// Opaque validated PLP sequence.
pub struct PlpSequence(plp::PlpSequence);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &PlpError) -> PlpStatus {
    match e {
        PlpError::Config(_) => PlpStatus::Config,
        PlpError::Domain(_) => PlpStatus::Domain,
        PlpError::Precision(_) => PlpStatus::Precision,
        PlpError::Usage(_) => PlpStatus::Usage,
        PlpError::Generation(_) => PlpStatus::Generation,
        PlpError::NotAllComposite { .. } => PlpStatus::NotAllComposite,
        PlpError::Precondition(_) => PlpStatus::Precondition,
        PlpError::BelowThreshold { .. } => PlpStatus::BelowThreshold,
        PlpError::InvalidSequence(_) => PlpStatus::InvalidSequence,
        PlpError::Parse(_) => PlpStatus::Parse,
        PlpError::Internal(_) => PlpStatus::Internal,
        PlpError::Io(_) => PlpStatus::Io,
    }
}

struct Failure(PlpStatus, String);

impl From<PlpError> for Failure {
    fn from(e: PlpError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(PlpStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and maps it to a status.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PlpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PlpStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside plp-core".to_string());
            PlpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(PlpStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|e| Failure(PlpStatus::Internal, e.to_string()))
}

fn json<T: serde::Serialize>(v: &T) -> Result<*mut c_char, Failure> {
    let s = serde_json::to_string(v).map_err(PlpError::from)?;
    to_c_string(s)
}

unsafe fn write_interval(v: IntervalValue, lo: *mut f64, hi: *mut f64) -> Result<(), Failure> {
    if lo.is_null() || hi.is_null() {
        return Err(null("interval output"));
    }
    lo.write(v.lo);
    hi.write(v.hi);
    Ok(())
}

unsafe fn write_certificate(
    cert: Certificate,
    out_verdict: *mut PlpVerdict,
    out_json: *mut *mut c_char,
) -> Result<(), Failure> {
    if out_json.is_null() {
        return Err(null("out_json"));
    }
    let text = json(&cert)?;
    if !out_verdict.is_null() {
        out_verdict.write(match cert.verdict {
            Verdict::Pass => PlpVerdict::Pass,
            Verdict::Fail => PlpVerdict::Fail,
            Verdict::Inconclusive => PlpVerdict::Inconclusive,
        });
    }
    out_json.write(text);
    Ok(())
}

/// Message for the last failed call on this thread, or null after a
/// successful one. The pointer stays valid until the next call into this
/// library from the same thread.
#[no_mangle]
pub extern "C" fn plp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn plp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds sieve tables for `1..=limit`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plp_sieve_new(limit: u64, out: *mut *mut PlpSieve) -> PlpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let t = SieveTables::build(limit)?;
        out.write(Box::into_raw(Box::new(PlpSieve(t))));
        Ok(())
    })
}

/// # Safety
/// `sieve` must come from [`plp_sieve_new`] and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn plp_sieve_free(sieve: *mut PlpSieve) {
    if !sieve.is_null() {
        drop(Box::from_raw(sieve));
    }
}

/// # Safety
/// `sieve` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn plp_sieve_limit(sieve: *const PlpSieve) -> u64 {
    sieve.as_ref().map_or(0, |s| s.0.limit())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_sieve_lpf(sieve: *const PlpSieve, n: u64, out: *mut u64) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        write(out, t.least_prime_factor(n)?, "out")
    })
}

/// `π(x)` for `x ≤ limit`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_sieve_prime_count(sieve: *const PlpSieve, x: u64, out: *mut u64) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        write(out, t.prime_count(x)?, "out")
    })
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_zeta(s: f64, width: f64, lo: *mut f64, hi: *mut f64) -> PlpStatus {
    guard(|| write_interval(zeta::zeta_real(s, width)?, lo, hi))
}

/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_prime_zeta_mobius(s: f64, width: f64, lo: *mut f64, hi: *mut f64) -> PlpStatus {
    guard(|| write_interval(zeta::prime_zeta_mobius(s, width)?, lo, hi))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_prime_zeta_direct(
    sieve: *const PlpSieve,
    s: f64,
    cutoff: u64,
    lo: *mut f64,
    hi: *mut f64,
) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        write_interval(zeta::prime_zeta_direct(t, s, cutoff)?, lo, hi)
    })
}

/// Cached certified `P(s)` for integer `s ≥ 2`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_p_constant(
    sieve: *const PlpSieve,
    s: u32,
    lo: *mut f64,
    hi: *mut f64,
) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        write_interval(zeta::p_constant(s, t)?, lo, hi)
    })
}

/// Parses `{"terms": [...]}` and validates it as a PLP sequence.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_from_json(json_text: *const c_char, out: *mut *mut PlpSequence) -> PlpStatus {
    guard(|| {
        let text = read_str(json_text, "json")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let terms = plp::read_terms_json(text.as_bytes())?;
        let seq = plp::PlpSequence::new(terms)?;
        out.write(Box::into_raw(Box::new(PlpSequence(seq))));
        Ok(())
    })
}

/// # Safety
/// `terms` must point to `len` values (may be null when `len == 0`).
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_from_u64(
    terms: *const u64,
    len: usize,
    out: *mut *mut PlpSequence,
) -> PlpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let slice: &[u64] = if len == 0 {
            &[]
        } else if terms.is_null() {
            return Err(null("terms"));
        } else {
            std::slice::from_raw_parts(terms, len)
        };
        let seq = plp::PlpSequence::from_u64s(slice)?;
        out.write(Box::into_raw(Box::new(PlpSequence(seq))));
        Ok(())
    })
}

/// # Safety
/// `seq` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_free(seq: *mut PlpSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// # Safety
/// `seq` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_len(seq: *const PlpSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_to_json(seq: *const PlpSequence, out_json: *mut *mut c_char) -> PlpStatus {
    guard(|| {
        let s = &deref(seq, "seq")?.0;
        let text = json(s)?;
        write(out_json, text, "out_json")
    })
}

/// Generates `count` terms of the named family (`fermat`, `mersenne`, ...).
/// `sieve` may be null for families that do not need one.
///
/// # Safety
/// `kind` must be a NUL-terminated string; other pointers valid or null as noted.
#[no_mangle]
pub unsafe extern "C" fn plp_generate(
    kind: *const c_char,
    count: usize,
    seed: u64,
    range_hint: u64,
    sieve: *const PlpSieve,
    out: *mut *mut PlpSequence,
) -> PlpStatus {
    guard(|| {
        let kind: GeneratorKind = read_str(kind, "kind")?.parse()?;
        if out.is_null() {
            return Err(null("out"));
        }
        let params = GenerateParams {
            count,
            seed: Some(seed),
            range_hint: (range_hint > 0).then_some(range_hint),
        };
        let t = sieve.as_ref().map(|s| &s.0);
        let seq = plp::generate(kind, &params, t)?;
        out.write(Box::into_raw(Box::new(PlpSequence(seq))));
        Ok(())
    })
}

/// Validates an arbitrary term list given as JSON, writing the report and
/// whether it is a PLP sequence. An invalid sequence is not an error.
///
/// # Safety
/// `json_text` must be a NUL-terminated string; `out_valid` may be null.
#[no_mangle]
pub unsafe extern "C" fn plp_validate_json(
    json_text: *const c_char,
    out_valid: *mut bool,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let text = read_str(json_text, "json")?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let terms = plp::read_terms_json(text.as_bytes())?;
        let report = plp::validate_plp(&terms);
        let s = json(&report)?;
        if !out_valid.is_null() {
            out_valid.write(report.valid);
        }
        out_json.write(s);
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid; `out_verdict` may be null.
#[no_mangle]
pub unsafe extern "C" fn plp_certify_reciprocal_bound(
    seq: *const PlpSequence,
    sieve: *const PlpSieve,
    out_verdict: *mut PlpVerdict,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let s = &deref(seq, "seq")?.0;
        let t = &deref(sieve, "sieve")?.0;
        write_certificate(certify::check_composite_reciprocal_bound(s, t)?, out_verdict, out_json)
    })
}

/// # Safety
/// Pointers must be valid; `out_verdict` may be null.
#[no_mangle]
pub unsafe extern "C" fn plp_decompose(
    seq: *const PlpSequence,
    sieve: *const PlpSieve,
    out_verdict: *mut PlpVerdict,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let s = &deref(seq, "seq")?.0;
        let t = &deref(sieve, "sieve")?.0;
        write_certificate(certify::decompose_reciprocal_sum(s, t)?, out_verdict, out_json)
    })
}

/// # Safety
/// Pointers must be valid; `out_verdict` may be null.
#[no_mangle]
pub unsafe extern "C" fn plp_certify_low_omega(
    seq: *const PlpSequence,
    s: u32,
    sieve: *const PlpSieve,
    out_verdict: *mut PlpVerdict,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let q = &deref(seq, "seq")?.0;
        let t = &deref(sieve, "sieve")?.0;
        write_certificate(certify::low_omega_witness(q, s, t)?, out_verdict, out_json)
    })
}

/// # Safety
/// Pointers must be valid; `out_verdict` may be null.
#[no_mangle]
pub unsafe extern "C" fn plp_certify_prime_witness(
    seq: *const PlpSequence,
    n: u64,
    mode: PlpDensityMode,
    sieve: *const PlpSieve,
    out_verdict: *mut PlpVerdict,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let q = &deref(seq, "seq")?.0;
        let t = &deref(sieve, "sieve")?.0;
        let mode = match mode {
            PlpDensityMode::Exact => DensityMode::Exact,
            PlpDensityMode::Rs => DensityMode::Rs,
        };
        write_certificate(certify::prime_witness_by_density(q, n, t, mode)?, out_verdict, out_json)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_thresholds(sieve: *const PlpSieve, n: u64, out: *mut PlpThresholds) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        let th = certify::compute_thresholds(n, t)?;
        write(
            out,
            PlpThresholds {
                n: th.n,
                exact: th.exact,
                rs: th.rs,
            },
            "out",
        )
    })
}

/// Largest composite PLP set in `[4, n]` (or the one with the largest
/// reciprocal sum when `by_sum` is set), as JSON.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn plp_oracle(
    sieve: *const PlpSieve,
    n: u64,
    by_sum: bool,
    out_json: *mut *mut c_char,
) -> PlpStatus {
    guard(|| {
        let t = &deref(sieve, "sieve")?.0;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let r = if by_sum {
            oracle::max_composite_reciprocal_sum(n, t)?
        } else {
            oracle::max_composite_plp_size(n, t)?
        };
        out_json.write(json(&r)?);
        Ok(())
    })
}

/// Decimal text of term `index`, or null if out of range.
///
/// # Safety
/// `seq` must be a live handle; free the result with [`plp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn plp_sequence_term(seq: *const PlpSequence, index: usize) -> *mut c_char {
    let Some(s) = seq.as_ref() else {
        return ptr::null_mut();
    };
    s.0.terms()
        .get(index)
        .map(BigUint::to_string)
        .and_then(|t| CString::new(t).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}
