//! Integer combinatorics: descending factorial powers, binomial
//! coefficients, integer square roots.

use crate::ExactRational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Descending factorial power `x(x-1)...(x-m+1)`, with the empty product
/// equal to 1 when `m = 0`. Negative `x` is allowed; the result follows the
/// product definition.
pub fn falling_factorial(x: i64, m: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..m as i64 {
        acc *= x - t;
    }
    acc
}

/// Factorial `m!`.
pub fn factorial(m: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 2..=m as u64 {
        acc *= t;
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero when `k < 0` or `k > n`.
pub fn binomial_exact(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i; // exact at every step
    }
    acc
}

/// Integer square root `⌊√n⌋` by Newton iteration.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    loop {
        let next = (r + n / r) / 2;
        if r == next || r == next - 1 {
            return r;
        }
        r = next;
    }
}

/// Converts a big rational to the nearest f64, tolerating numerators and
/// denominators far beyond the f64 range. Saturates to `±inf` when the value
/// itself overflows.
pub fn ratio_to_f64(r: &ExactRational) -> f64 {
    let numer = r.numer();
    let denom = r.denom();
    if numer.is_zero() {
        return 0.0;
    }
    let sign = if numer.is_negative() { -1.0 } else { 1.0 };
    let n = numer.abs();
    let d = denom.clone();
    // Shift so the integer quotient keeps ~80 significant bits.
    let shift = 80 - (n.bits() as i64 - d.bits() as i64);
    let (q, exp2) = if shift >= 0 {
        ((n << shift as u64) / d, -shift)
    } else {
        (n / (d << (-shift) as u64), -shift)
    };
    let mut v = q.to_f64().unwrap_or(f64::INFINITY);
    let mut e = exp2;
    // Apply the power of two in safe chunks.
    while e > 900 {
        v *= 2f64.powi(900);
        e -= 900;
    }
    while e < -900 {
        v *= 2f64.powi(-900);
        e += 900;
    }
    sign * v * 2f64.powi(e as i32)
}
