//! Mod-floor helpers and a small outward-rounded interval type.
//!
//! Every arithmetic operation on [`OuterInterval`] returns a closed interval
//! containing the exact real image of its operands. Rounding errors are
//! detected with error-free transformations (two-sum, fused multiply-add) and
//! the affected endpoint is moved one representable step outward; results
//! that are exact stay exact.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Radicands down to `-SQRT_SLACK` are clamped to zero by [`OuterInterval::sqrt`].
pub const SQRT_SLACK: f64 = 1e-12;

fn check_period(ell: f64) -> Result<()> {
    if ell > 0.0 && ell.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("period must be positive and finite"))
    }
}

/// Returns `(q, frac)` with `q = floor(x / ell)` and `frac` in `[0, ell)`.
///
/// `x - q * ell` is formed with a single rounding, so its sign is exact and
/// `q` is the true floor; `frac` is then clamped into `[0, ell)`.
fn split(x: f64, ell: f64) -> (f64, f64) {
    let mut q = libm::floor(x / ell);
    let mut frac = libm::fma(-q, ell, x);
    if frac < 0.0 {
        q -= 1.0;
        frac = libm::fma(-q, ell, x);
    } else if frac >= ell {
        let next = libm::fma(-(q + 1.0), ell, x);
        if next >= 0.0 {
            q += 1.0;
            frac = next;
        }
    }
    if frac >= ell {
        frac = ell.next_down();
    }
    (q, frac.max(0.0))
}

/// Largest integer multiple of `ell` not exceeding `x`.
pub fn mod_floor(x: f64, ell: f64) -> Result<f64> {
    check_period(ell)?;
    let (q, _) = split(x, ell);
    Ok(q * ell)
}

/// Remainder of `x` modulo `ell`, in `[0, ell)`.
pub fn mod_frac(x: f64, ell: f64) -> Result<f64> {
    check_period(ell)?;
    Ok(split(x, ell).1)
}

/// Unchecked variants for hot loops where the period has already been validated.
#[inline]
pub(crate) fn floor_index(x: f64, ell: f64) -> f64 {
    split(x, ell).0
}

#[inline]
pub(crate) fn frac_unchecked(x: f64, ell: f64) -> f64 {
    split(x, ell).1
}

// Rounded result plus the sign of (exact - rounded).
#[inline]
fn down(value: f64, err: f64) -> f64 {
    if err < 0.0 {
        value.next_down()
    } else {
        value
    }
}

#[inline]
fn up(value: f64, err: f64) -> f64 {
    if err > 0.0 {
        value.next_up()
    } else {
        value
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn add_down(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    down(s, e)
}

#[inline]
fn add_up(a: f64, b: f64) -> f64 {
    let (s, e) = two_sum(a, b);
    up(s, e)
}

#[inline]
fn mul_err(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

#[inline]
fn div_err(a: f64, b: f64) -> (f64, f64) {
    let q = a / b;
    // a - q*b is exact; the sign of the quotient error follows from b's sign
    let rem = libm::fma(-q, b, a);
    (q, if b > 0.0 { rem } else { -rem })
}

/// Closed interval `[lo, hi]` with finite endpoints.
#[derive(Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OuterInterval {
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for OuterInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

#[allow(clippy::should_implement_trait)]
impl OuterInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidParameter("interval needs finite lo <= hi"));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval holding a single representable value.
    pub const fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Interval spanning `a` and `b` in either order.
    pub fn hull_of(a: f64, b: f64) -> Self {
        Self {
            lo: a.min(b),
            hi: a.max(b),
        }
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(self) -> f64 {
        0.5 * self.lo + 0.5 * self.hi
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(self, other: Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(self, other: Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    /// Moves both endpoints outward by `by`.
    pub fn widen(self, by: f64) -> Self {
        Self {
            lo: add_down(self.lo, -by),
            hi: add_up(self.hi, by),
        }
    }

    pub fn neg(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in [self.lo, self.hi] {
            for b in [other.lo, other.hi] {
                let (p, e) = mul_err(a, b);
                lo = lo.min(down(p, e));
                hi = hi.max(up(p, e));
            }
        }
        Self { lo, hi }
    }

    /// Division by an interval that excludes zero.
    pub fn div(self, other: Self) -> Result<Self> {
        if other.contains(0.0) {
            return Err(Error::InvalidParameter("interval division by zero"));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in [self.lo, self.hi] {
            for b in [other.lo, other.hi] {
                let (q, e) = div_err(a, b);
                lo = lo.min(down(q, e));
                hi = hi.max(up(q, e));
            }
        }
        Ok(Self { lo, hi })
    }

    /// Square without the dependency blow-up of `self.mul(self)`.
    pub fn sqr(self) -> Self {
        let a = self.abs();
        let (plo, elo) = mul_err(a.lo, a.lo);
        let (phi, ehi) = mul_err(a.hi, a.hi);
        Self {
            lo: down(plo, elo).max(0.0),
            hi: up(phi, ehi),
        }
    }

    pub fn abs(self) -> Self {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Self {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    /// Square root. A lower bound down to `-SQRT_SLACK` is clamped to zero.
    pub fn sqrt(self) -> Result<Self> {
        if self.lo < -SQRT_SLACK {
            return Err(Error::NegativeRadicand(self.lo));
        }
        let lo = self.lo.max(0.0);
        let hi = self.hi.max(0.0);
        let root = |x: f64| {
            let s = libm::sqrt(x);
            (s, libm::fma(-s, s, x))
        };
        let (slo, elo) = root(lo);
        let (shi, ehi) = root(hi);
        Ok(Self {
            lo: down(slo, elo).max(0.0),
            hi: up(shi, ehi),
        })
    }

    pub fn max0(self) -> Self {
        Self {
            lo: self.lo.max(0.0),
            hi: self.hi.max(0.0),
        }
    }

    pub fn scale(self, k: f64) -> Self {
        self.mul(Self::point(k))
    }
}

/// Encloses `{ mod_frac(x, ell) : x in interval, ell in period }`.
///
/// Returns one interval, or two when the interval straddles a multiple of the
/// period (the piece below the wrap comes first).
pub fn interval_mod_reduce(interval: OuterInterval, period: OuterInterval) -> Result<Vec<OuterInterval>> {
    if period.lo.is_nan() || period.lo <= 0.0 {
        return Err(Error::InvalidParameter("period must be positive"));
    }
    if interval.width() >= period.lo {
        return Err(Error::PeriodTooNarrow {
            width: interval.width(),
            period: period.lo,
        });
    }
    let base = libm::floor(interval.lo / period.mid());
    let target = OuterInterval { lo: 0.0, hi: period.hi };
    let mut out = Vec::with_capacity(2);
    for m in [base - 1.0, base, base + 1.0] {
        let shifted = interval.sub(period.scale(m));
        // the true remainder is strictly below the period
        if shifted.lo >= period.hi {
            continue;
        }
        if let Some(piece) = shifted.intersect(target) {
            out.push(piece);
        }
    }
    Ok(out)
}

/// [`interval_mod_reduce`] with an exactly representable period.
pub fn interval_mod_reduce_f64(interval: OuterInterval, ell: f64) -> Result<Vec<OuterInterval>> {
    check_period(ell)?;
    interval_mod_reduce(interval, OuterInterval::point(ell))
}
