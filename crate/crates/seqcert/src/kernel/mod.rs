//! Exact big-integer/rational primitives and error-tracked floating
//! arithmetic.
//!
//! Two value domains are supported. `Exact` works on arbitrary-precision
//! rationals and never approximates. `Log(bits)` works on floating values
//! carrying a rigorous absolute error bound ([`TrackedReal`]); sign queries
//! on tracked values must go through [`certify_sign`], which refuses to
//! answer when the bound straddles zero.

mod comb;
mod kahan;
mod logspace;
pub mod mp;
mod tracked;

pub use comb::{binomial_exact, factorial, falling_factorial, isqrt, ratio_to_f64};
pub use kahan::CompensatedSum;
pub use logspace::{lgamma, log_binomial};
pub use tracked::TrackedReal;

use serde::{Deserialize, Serialize};

/// Arithmetic regime for an evaluation or verification run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NumericMode {
    /// Arbitrary-precision rational arithmetic; comparisons are exact.
    Exact,
    /// Floating evaluation at the given precision with tracked error bounds.
    Log { bits: u32 },
}

impl NumericMode {
    /// Log-mode constructor; `bits` below 53 is rejected.
    pub fn log(bits: u32) -> crate::Result<Self> {
        if bits < 53 {
            return Err(crate::Error::domain(format!(
                "precision must be at least 53 bits, got {bits}"
            )));
        }
        Ok(NumericMode::Log { bits })
    }

    pub fn describe(&self) -> String {
        match self {
            NumericMode::Exact => "exact".to_string(),
            NumericMode::Log { bits } => format!("log({bits})"),
        }
    }
}

/// Outcome of a certified sign query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Positive,
    Negative,
    /// The error bound straddles zero; the caller must escalate precision
    /// or switch to exact arithmetic.
    Indeterminate,
}

/// Certifies the sign of a tracked value.
///
/// Returns `Positive` only when `value - abs_error > 0` and `Negative` only
/// when `value + abs_error < 0`; anything else (including NaN) is
/// `Indeterminate`.
pub fn certify_sign(x: TrackedReal) -> Sign {
    let (v, e) = (x.value(), x.abs_error());
    if v.is_nan() || e.is_nan() || e.is_infinite() {
        return Sign::Indeterminate;
    }
    if v - e > 0.0 {
        Sign::Positive
    } else if v + e < 0.0 {
        Sign::Negative
    } else {
        Sign::Indeterminate
    }
}

/// The escalation ladder for sign certification: floating evaluations at
/// 53, 113 and 256 bits, then exact arithmetic.
///
/// `tracked` evaluates the quantity at a requested precision; `exact` decides
/// the sign outright. The first certified answer wins. Returns the sign and
/// the precision that settled it (`None` means the exact fallback ran).
pub fn certify_with_ladder<T, E>(start_bits: u32, tracked: T, exact: E) -> (Sign, Option<u32>)
where
    T: Fn(u32) -> TrackedReal,
    E: FnOnce() -> Sign,
{
    const RUNGS: [u32; 3] = [53, 113, 256];
    for &bits in RUNGS.iter().filter(|&&b| b >= start_bits) {
        let sign = certify_sign(tracked(bits));
        if sign != Sign::Indeterminate {
            return (sign, Some(bits));
        }
    }
    (exact(), None)
}
