//! Floating values carrying a rigorous absolute error bound.

use crate::{Error, Result};

/// Unit roundoff of f64 (2^-53).
const U: f64 = f64::EPSILON / 2.0;
/// Absolute floor added to rounding terms so subnormal results stay covered.
const TINY: f64 = 1e-300;

/// Outward fudge applied to every computed bound so that the f64 arithmetic
/// evaluating the bound itself cannot round it below the true worst case.
#[inline]
fn up(e: f64) -> f64 {
    e * (1.0 + 1e-12)
}

/// Bound on the rounding error of one f64 operation that produced `v`.
#[inline]
fn rnd(v: f64) -> f64 {
    v.abs() * U + TINY
}

/// A floating value `value` together with a bound `abs_error` such that the
/// true quantity lies in `[value - abs_error, value + abs_error]`.
///
/// All arithmetic propagates bounds outward: the resulting bound is always at
/// least the worst case over the operand intervals plus the rounding of the
/// operation itself. Bounds are deliberately conservative, never tight.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrackedReal {
    value: f64,
    abs_error: f64,
}

impl TrackedReal {
    pub fn new(value: f64, abs_error: f64) -> Self {
        debug_assert!(!(abs_error < 0.0), "negative error bound");
        TrackedReal { value, abs_error }
    }

    /// A value known exactly (zero error bound). Only correct when `value`
    /// is the exact quantity, e.g. a small integer or a dyadic rational.
    pub fn exact(value: f64) -> Self {
        TrackedReal {
            value,
            abs_error: 0.0,
        }
    }

    /// `p / q` for integers, carrying the conversion and division roundings.
    pub fn from_ratio(p: i128, q: i128) -> Self {
        let v = p as f64 / q as f64;
        TrackedReal::new(v, up(3.0 * rnd(v)))
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn abs_error(&self) -> f64 {
        self.abs_error
    }

    pub fn neg(&self) -> Self {
        TrackedReal::new(-self.value, self.abs_error)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let v = self.value + rhs.value;
        TrackedReal::new(v, up(self.abs_error + rhs.abs_error + rnd(v)))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let v = self.value - rhs.value;
        TrackedReal::new(v, up(self.abs_error + rhs.abs_error + rnd(v)))
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let v = self.value * rhs.value;
        let e = self.value.abs() * rhs.abs_error
            + rhs.value.abs() * self.abs_error
            + self.abs_error * rhs.abs_error
            + rnd(v);
        TrackedReal::new(v, up(e))
    }

    /// Division; fails when the divisor interval contains zero.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let db = rhs.value.abs() - rhs.abs_error;
        if !(db > 0.0) {
            return Err(Error::domain(
                "tracked division by an interval containing zero",
            ));
        }
        let v = self.value / rhs.value;
        let e = (self.abs_error + v.abs() * rhs.abs_error) / db + rnd(v);
        Ok(TrackedReal::new(v, up(e)))
    }

    /// Multiplication by an exactly-representable constant.
    pub fn scale(&self, c: f64) -> Self {
        let v = self.value * c;
        TrackedReal::new(v, up(c.abs() * self.abs_error + rnd(v)))
    }

    /// Natural log; the operand interval must be strictly positive.
    pub fn ln(&self) -> Result<Self> {
        let lo = self.value - self.abs_error;
        if !(lo > 0.0) {
            return Err(Error::domain("tracked ln of a non-positive interval"));
        }
        let v = self.value.ln();
        // |ln x - ln x'| <= |x - x'| / min(x, x'); libm ln is a few ulp.
        let e = self.abs_error / lo + 4.0 * rnd(v);
        Ok(TrackedReal::new(v, up(e)))
    }

    /// `ln(1 + x)`; the interval `1 + x` must be strictly positive.
    pub fn ln_1p(&self) -> Result<Self> {
        let lo = 1.0 + (self.value - self.abs_error);
        if !(lo > 0.0) {
            return Err(Error::domain("tracked ln_1p of a non-positive interval"));
        }
        let v = self.value.ln_1p();
        let e = self.abs_error / lo + 4.0 * rnd(v);
        Ok(TrackedReal::new(v, up(e)))
    }

    /// `e^x`; fails on overflow to infinity.
    pub fn exp(&self) -> Result<Self> {
        let v = self.value.exp();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("exp({})", self.value)));
        }
        // worst case over the interval: exp(v) * (exp(abs_error) - 1).
        let e = v * self.abs_error.exp_m1();
        Ok(TrackedReal::new(v, up(e + 4.0 * rnd(v))))
    }

    /// `e^x - 1`; fails on overflow.
    pub fn exp_m1(&self) -> Result<Self> {
        let v = self.value.exp_m1();
        if !v.is_finite() {
            return Err(Error::Overflow(format!("exp_m1({})", self.value)));
        }
        let e = (self.value + self.abs_error).exp() * self.abs_error;
        Ok(TrackedReal::new(v, up(e + 4.0 * rnd(v))))
    }

    /// Widens the bound to at least `extra`.
    pub fn widen(&self, extra: f64) -> Self {
        TrackedReal::new(self.value, up(self.abs_error + extra))
    }

    /// True when the interval `[value - abs_error, value + abs_error]`
    /// contains `x`.
    pub fn contains(&self, x: f64) -> bool {
        (self.value - x).abs() <= self.abs_error
    }
}
