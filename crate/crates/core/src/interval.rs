//! Closed `f64` intervals with outward rounding.
//!
//! The hardware rounds to nearest. Directed rounding for `+`, `-`, `*`, `/`
//! and `sqrt` is recovered exactly from the error-free transformations
//! (`two_sum`, `fma` residuals): the result is moved one ulp only when the
//! rounded value lies on the wrong side of the exact one. Library functions
//! (`ln`, `ln_1p`, `powf`) are assumed faithful to within one ulp and are
//! widened by two ulps on each side.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A real quantity known to lie in `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalValue {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// `a + b` rounded toward −∞.
#[inline]
pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// `a + b` rounded toward +∞.
#[inline]
pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    if e > 0.0 {
        s.next_up()
    } else {
        s
    }
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

#[inline]
pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

#[inline]
pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    if a.mul_add(b, -p) > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// `a / b` rounded toward −∞, `b > 0`.
#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    debug_assert!(b > 0.0);
    let q = a / b;
    // a - q*b has the sign of the exact quotient minus q
    if (-q).mul_add(b, a) < 0.0 {
        q.next_down()
    } else {
        q
    }
}

/// `a / b` rounded toward +∞, `b > 0`.
#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    debug_assert!(b > 0.0);
    let q = a / b;
    if (-q).mul_add(b, a) > 0.0 {
        q.next_up()
    } else {
        q
    }
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    let r = x.sqrt();
    if r.mul_add(r, -x) > 0.0 {
        r.next_down()
    } else {
        r
    }
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    let r = x.sqrt();
    if r.mul_add(r, -x) < 0.0 {
        r.next_up()
    } else {
        r
    }
}

#[inline]
fn widen_down(x: f64) -> f64 {
    x.next_down().next_down()
}

#[inline]
fn widen_up(x: f64) -> f64 {
    x.next_up().next_up()
}

/// Lower bound on `ln(x)`.
pub fn ln_down(x: f64) -> f64 {
    widen_down(x.ln())
}

/// Upper bound on `ln(x)`.
pub fn ln_up(x: f64) -> f64 {
    widen_up(x.ln())
}

/// Converts an integer to an enclosing pair of doubles.
pub fn u64_enclosure(n: u64) -> (f64, f64) {
    let f = n as f64;
    if f as u128 == n as u128 {
        (f, f)
    } else if (f as u128) > n as u128 {
        (f.next_down(), f)
    } else {
        (f, f.next_up())
    }
}

impl IntervalValue {
    pub const ZERO: IntervalValue = IntervalValue { lo: 0.0, hi: 0.0 };

    /// Panics if `lo > hi`.
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        IntervalValue { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        IntervalValue { lo: x, hi: x }
    }

    pub fn from_u64(n: u64) -> Self {
        let (lo, hi) = u64_enclosure(n);
        IntervalValue { lo, hi }
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    pub fn midpoint(&self) -> f64 {
        self.lo + (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn encloses(&self, other: &IntervalValue) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &IntervalValue) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersection(&self, other: &IntervalValue) -> Option<IntervalValue> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(IntervalValue { lo, hi })
    }

    /// Certified `self < other`.
    pub fn certainly_lt(&self, other: &IntervalValue) -> bool {
        self.hi < other.lo
    }

    /// Certified `self ≤ other`.
    pub fn certainly_le(&self, other: &IntervalValue) -> bool {
        self.hi <= other.lo
    }

    pub fn add(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(&self, other: &IntervalValue) -> IntervalValue {
        IntervalValue {
            lo: sub_down(self.lo, other.hi),
            hi: sub_up(self.hi, other.lo),
        }
    }

    pub fn neg(&self) -> IntervalValue {
        IntervalValue {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    /// Product of two intervals with non-negative endpoints.
    pub fn mul_nonneg(&self, other: &IntervalValue) -> IntervalValue {
        debug_assert!(self.lo >= 0.0 && other.lo >= 0.0);
        IntervalValue {
            lo: mul_down(self.lo, other.lo),
            hi: mul_up(self.hi, other.hi),
        }
    }

    /// Quotient of a non-negative interval by a strictly positive one.
    pub fn div_pos(&self, other: &IntervalValue) -> IntervalValue {
        debug_assert!(self.lo >= 0.0 && other.lo > 0.0);
        IntervalValue {
            lo: div_down(self.lo, other.hi),
            hi: div_up(self.hi, other.lo),
        }
    }

    /// `1 / self` for a strictly positive interval.
    pub fn recip(&self) -> IntervalValue {
        IntervalValue::point(1.0).div_pos(self)
    }

    /// `ln(1 + self)` for `self.lo > -1`.
    pub fn ln_1p(&self) -> IntervalValue {
        IntervalValue {
            lo: widen_down(self.lo.ln_1p()),
            hi: widen_up(self.hi.ln_1p()),
        }
    }

    /// `base^exponent` for an exact positive `base`.
    ///
    /// Integral exponents of moderate size go through outward-rounded
    /// repeated squaring; anything else goes through `powf`.
    pub fn pow_of(base: f64, exponent: f64) -> IntervalValue {
        debug_assert!(base > 0.0);
        if exponent.fract() == 0.0 && exponent.abs() <= 64.0 {
            let e = exponent.abs() as u32;
            let mut acc = IntervalValue::point(1.0);
            let mut sq = IntervalValue::point(base);
            let mut k = e;
            while k > 0 {
                if k & 1 == 1 {
                    acc = acc.mul_nonneg(&sq);
                }
                k >>= 1;
                if k > 0 {
                    sq = sq.mul_nonneg(&sq);
                }
            }
            if acc.hi.is_finite() {
                return if exponent < 0.0 { acc.recip() } else { acc };
            }
        }
        let v = base.powf(exponent);
        IntervalValue {
            lo: widen_down(v).max(0.0),
            hi: widen_up(v),
        }
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", self.lo, self.hi)
    }
}

/// Compensated accumulation of interval terms.
///
/// Each endpoint keeps a running double plus a compensation term that
/// collects the exact `two_sum` residuals, so the enclosure width grows with
/// the widths of the inputs rather than with the number of additions.
#[derive(Clone, Copy, Debug, Default)]
pub struct DirectedSum {
    lo: f64,
    lo_comp: f64,
    hi: f64,
    hi_comp: f64,
}

impl DirectedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: &IntervalValue) {
        let (s, e) = two_sum(self.lo, term.lo);
        self.lo = s;
        self.lo_comp = add_down(self.lo_comp, e);
        let (s, e) = two_sum(self.hi, term.hi);
        self.hi = s;
        self.hi_comp = add_up(self.hi_comp, e);
    }

    pub fn value(&self) -> IntervalValue {
        IntervalValue {
            lo: add_down(self.lo, self.lo_comp),
            hi: add_up(self.hi, self.hi_comp),
        }
    }
}

impl<'a> FromIterator<&'a IntervalValue> for DirectedSum {
    fn from_iter<I: IntoIterator<Item = &'a IntervalValue>>(iter: I) -> Self {
        let mut acc = DirectedSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

impl FromIterator<IntervalValue> for DirectedSum {
    fn from_iter<I: IntoIterator<Item = IntervalValue>>(iter: I) -> Self {
        let mut acc = DirectedSum::new();
        for v in iter {
            acc.add(&v);
        }
        acc
    }
}
