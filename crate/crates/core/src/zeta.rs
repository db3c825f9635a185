//! Certified enclosures of the Riemann zeta and prime zeta functions for
//! real `s > 1`.
//!
//! `P(s)` is computed two independent ways: as a truncated sum over sieved
//! primes with an explicit tail bound, and through the Möbius inversion
//! `P(s) = Σ_{k≥1} μ(k)/k · ln ζ(ks)`. [`p_constant`] intersects the two.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{PlpError, Result};
use crate::interval::{
    add_down, add_up, div_down, div_up, mul_down, mul_up, sub_down, sub_up, DirectedSum,
    IntervalValue,
};
use crate::sieve::{build_sieve, SieveTables};

/// Width of the cached `P(s)` constants.
pub const DEFAULT_WIDTH: f64 = 1e-10;

/// Width requested from the Möbius evaluator when building cached
/// constants; tighter than [`DEFAULT_WIDTH`] so the intersection is
/// dominated by neither rounding nor truncation.
const CONSTANT_MOBIUS_WIDTH: f64 = 1e-12;

const MAX_ZETA_TERMS: u64 = 100_000_000;

fn check_s(s: f64) -> Result<()> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(PlpError::Domain(format!("s must be a finite real > 1, got {s}")));
    }
    Ok(())
}

fn check_width(w: f64) -> Result<()> {
    if !(w > 0.0) {
        return Err(PlpError::Domain(format!("target width must be > 0, got {w}")));
    }
    Ok(())
}

/// Enclosure of `s - 1`.
fn s_minus_one(s: f64) -> IntervalValue {
    IntervalValue {
        lo: sub_down(s, 1.0),
        hi: sub_up(s, 1.0),
    }
}

/// `Σ_{k≥m} k^{-s}` enclosed between the trapezoid and midpoint estimates of
/// the convex integrand: `∫_m^∞ + m^{-s}/2 ≤ tail ≤ ∫_{m-1/2}^∞`.
fn integer_power_tail(m: u64, s: f64) -> IntervalValue {
    let m = m as f64;
    let denom = s_minus_one(s);
    let lower_integral = div_down(IntervalValue::pow_of(m, 1.0 - s).lo, denom.hi);
    let half_term = IntervalValue::pow_of(m, -s).lo / 2.0;
    let upper_integral = div_up(IntervalValue::pow_of(m - 0.5, 1.0 - s).hi, denom.lo);
    IntervalValue {
        lo: add_down(lower_integral, half_term),
        hi: upper_integral,
    }
}

/// `Σ_{k=2}^{n} k^{-s}`.
fn partial_sum_from_two(n: u64, s: f64) -> IntervalValue {
    (2..=n)
        .map(|k| IntervalValue::pow_of(k as f64, -s))
        .collect::<DirectedSum>()
        .value()
}

/// Enclosure of `ζ(x) - 1` for every `x` in `[s_lo, s_hi]`.
fn zeta_minus_one_on(s_lo: f64, s_hi: f64, target_width: f64) -> Result<IntervalValue> {
    // leading-order tail width is s/8 · m^{-s-1}; aim for half the budget
    let m0 = (s_lo / (4.0 * target_width)).powf(1.0 / (s_lo + 1.0)).ceil();
    let mut n = if m0.is_finite() { (m0 as u64).clamp(16, MAX_ZETA_TERMS) } else { MAX_ZETA_TERMS };
    loop {
        let (lo_part, hi_part) = if s_lo == s_hi {
            let p = partial_sum_from_two(n, s_lo);
            (p, p)
        } else {
            (partial_sum_from_two(n, s_hi), partial_sum_from_two(n, s_lo))
        };
        let tail_lo = integer_power_tail(n + 1, s_hi);
        let tail_hi = integer_power_tail(n + 1, s_lo);
        let value = IntervalValue {
            lo: add_down(lo_part.lo, tail_lo.lo),
            hi: add_up(hi_part.hi, tail_hi.hi),
        };
        if value.width() <= target_width {
            return Ok(value);
        }
        let rounding = sub_up(hi_part.hi, lo_part.lo);
        if rounding > target_width / 2.0 || n >= MAX_ZETA_TERMS {
            return Err(PlpError::Precision(format!(
                "ζ({s_lo}) cannot be enclosed to width {target_width:e} \
                 (reached {:e} with {n} terms)",
                value.width()
            )));
        }
        n = (n * 2).min(MAX_ZETA_TERMS);
    }
}

/// `ζ(s)` to within `target_width`.
pub fn zeta_real(s: f64, target_width: f64) -> Result<IntervalValue> {
    check_s(s)?;
    check_width(target_width)?;
    let z = zeta_minus_one_on(s, s, target_width)?;
    let one = IntervalValue::point(1.0);
    let out = one.add(&z);
    if out.width() > target_width {
        return Err(PlpError::Precision(format!(
            "ζ({s}) enclosure width {:e} exceeds {target_width:e}",
            out.width()
        )));
    }
    Ok(out)
}

/// `[Σ_{p≤cutoff} p^{-s}, same + cutoff^{1-s}/(s-1)]`.
pub fn prime_zeta_direct(t: &SieveTables, s: f64, cutoff: u64) -> Result<IntervalValue> {
    check_s(s)?;
    if cutoff == 0 || cutoff > t.limit() {
        return Err(PlpError::Domain(format!(
            "cutoff {cutoff} outside 1..={} (sieve limit)",
            t.limit()
        )));
    }
    let count = t.prime_count(cutoff)? as usize;
    let partial = t.primes()[..count]
        .iter()
        .map(|&p| IntervalValue::pow_of(p as f64, -s))
        .collect::<DirectedSum>()
        .value();
    let tail = div_up(
        IntervalValue::pow_of(cutoff as f64, 1.0 - s).hi,
        s_minus_one(s).lo,
    );
    Ok(IntervalValue {
        lo: partial.lo,
        hi: add_up(partial.hi, tail),
    })
}

/// Upper bound on `|Σ_{k>terms} μ(k)/k · ln ζ(ks)|`.
///
/// Uses `ln ζ(x) ≤ ζ(x) - 1 ≤ 2^{-x}(x+1)/(x-1) ≤ 2·2^{-x}` for `x ≥ 3`, so
/// the remainder is at most `2/(K+1) · 2^{-(K+1)s} / (1 - 2^{-s})`.
fn mobius_remainder(terms: u64, s: f64) -> Option<f64> {
    let next = (terms + 1) as f64;
    let first_arg = mul_down(next, s);
    if first_arg < 3.0 {
        return None;
    }
    let geometric_head = IntervalValue::pow_of(2.0, -first_arg).hi;
    let ratio = IntervalValue::pow_of(2.0, -s).hi;
    let denom = sub_down(1.0, ratio);
    Some(div_up(mul_up(div_up(2.0, next), geometric_head), denom))
}

/// `P(s)` to within `target_width` by Möbius inversion of `ln ζ`.
pub fn prime_zeta_mobius(s: f64, target_width: f64) -> Result<IntervalValue> {
    check_s(s)?;
    check_width(target_width)?;

    let mut terms = 1u64;
    let remainder = loop {
        match mobius_remainder(terms, s) {
            Some(r) if r <= target_width / 4.0 => break r,
            _ => terms += 1,
        }
        if terms > 10_000 {
            return Err(PlpError::Precision(format!(
                "Möbius series for P({s}) does not reach width {target_width:e}"
            )));
        }
    };

    let mobius_table = build_sieve(terms.max(2))?;
    let mu: Vec<(u64, i8)> = (1..=terms)
        .map(|k| Ok((k, mobius_table.factorize(k)?.mobius())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|&(_, m)| m != 0)
        .collect();
    let per_term = target_width / (4.0 * mu.len() as f64);

    let mut acc = DirectedSum::new();
    for &(k, m) in &mu {
        let kf = k as f64;
        let arg = IntervalValue {
            lo: mul_down(kf, s),
            hi: mul_up(kf, s),
        };
        let z = zeta_minus_one_on(arg.lo, arg.hi, per_term)?;
        let term = z.ln_1p().div_pos(&IntervalValue::point(kf));
        acc.add(&if m < 0 { term.neg() } else { term });
    }
    acc.add(&IntervalValue {
        lo: -remainder,
        hi: remainder,
    });
    let out = acc.value();
    if out.width() > target_width {
        return Err(PlpError::Precision(format!(
            "P({s}) enclosure width {:e} exceeds {target_width:e}",
            out.width()
        )));
    }
    Ok(out)
}

fn constant_cache() -> &'static Mutex<HashMap<(u32, u64), IntervalValue>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u64), IntervalValue>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `P(s)` for integer `s ≥ 2` as the intersection of the direct sum over the
/// whole sieve and the Möbius evaluation. Cached per `(s, sieve limit)`.
pub fn p_constant(s: u32, t: &SieveTables) -> Result<IntervalValue> {
    if s < 2 {
        return Err(PlpError::Domain(format!("p_constant requires s ≥ 2, got {s}")));
    }
    let key = (s, t.limit());
    if let Some(v) = constant_cache().lock().unwrap().get(&key) {
        return Ok(*v);
    }
    let direct = prime_zeta_direct(t, s as f64, t.limit())?;
    let mobius = prime_zeta_mobius(s as f64, CONSTANT_MOBIUS_WIDTH)?;
    let value = direct.intersection(&mobius).ok_or_else(|| {
        PlpError::Internal(format!(
            "P({s}) evaluators disagree: direct {direct}, Möbius {mobius}"
        ))
    })?;
    debug_assert!(value.width() <= DEFAULT_WIDTH);
    constant_cache().lock().unwrap().insert(key, value);
    Ok(value)
}
