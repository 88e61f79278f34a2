//! Certified verification of convexity, threshold and expectation
//! inequalities for a family of combinatorial sequence functions.
//!
//! The library evaluates the sequence functions `g`, `h`, `d = g - h` and the
//! weight distribution `q` either exactly (arbitrary-precision rationals) or
//! in error-tracked floating arithmetic, and exposes verification suites that
//! certify strict inequalities rather than merely sampling them: every sign
//! decision is either an exact integer comparison or passes through
//! [`kernel::certify_sign`] with a rigorous error bound.

pub mod asymptotics;
pub mod diff;
pub mod funcs;
pub mod kernel;
pub mod pairwise;
pub mod report;
pub mod threshold;

use num_bigint::BigInt;
use num_rational::Ratio;

/// The exact value domain: arbitrary-precision rationals in lowest terms
/// with a positive denominator.
pub type ExactRational = Ratio<BigInt>;

/// Errors surfaced by evaluation and verification entry points.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid evaluation point: l={l}, j={j} ({reason})")]
    InvalidPoint { l: i64, j: i64, reason: &'static str },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index out of range: {0}")]
    IndexRange(String),
    #[error("value not representable in f64: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn index(msg: impl Into<String>) -> Self {
        Error::IndexRange(msg.into())
    }
}
