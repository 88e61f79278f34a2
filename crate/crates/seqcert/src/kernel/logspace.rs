//! Log-domain evaluation of huge binomial coefficients with certified
//! error bounds.

use super::kahan::CompensatedSum;
use super::mp;
use super::tracked::TrackedReal;
use crate::{Error, Result};

const U: f64 = f64::EPSILON / 2.0;
const LN_2PI: f64 = 1.8378770664093454836;

/// Stirling-series coefficients B_{2k} / (2k (2k-1)) for k = 1..6.
const STIRLING: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
];

/// `ln Γ(x)` for `x > 0` with a rigorous absolute error bound.
///
/// Uses the Stirling series at `x >= 16` (shifting smaller arguments up by
/// the recurrence); the truncation remainder is bounded by the first omitted
/// term, `|B_14| / (14 · 13 · x^13)`, and enters the bound together with the
/// floating rounding of every term.
pub fn lgamma(x: f64) -> Result<TrackedReal> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("lgamma domain: x={x}")));
    }
    let mut shift = CompensatedSum::new();
    let mut y = x;
    while y < 16.0 {
        let t = y.ln();
        shift.add(t, 2.0 * (t.abs() * U + 1e-300));
        y += 1.0;
    }
    let ln_y = y.ln();
    let main = (y - 0.5) * ln_y - y + 0.5 * LN_2PI;
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = STIRLING[5];
    for k in (0..5).rev() {
        series = STIRLING[k] + inv2 * series;
    }
    series *= inv;
    let remainder = (7.0 / 6.0) / (182.0 * y.powi(13));
    let value = main + series - shift.value();
    let eval_err = 32.0 * U * ((y - 0.5).abs() * ln_y.abs() + y + 2.0 + series.abs());
    let bound = (remainder + eval_err + shift.bound()) * (1.0 + 1e-12);
    Ok(TrackedReal::new(value, bound))
}

/// `ln C(n, k)` with an error bound valid for the requested precision.
///
/// At 53 bits the bound accounts for the log-gamma approximation error;
/// higher precisions run on the multi-precision rung. `k` outside `0..=n`
/// is a domain error (unlike [`super::binomial_exact`], which returns 0).
pub fn log_binomial(n: u64, k: i64, bits: u32) -> Result<TrackedReal> {
    if k < 0 || k as u64 > n {
        return Err(Error::domain(format!("log_binomial domain: n={n}, k={k}")));
    }
    if bits < 53 {
        return Err(Error::domain(format!("precision below 53 bits: {bits}")));
    }
    let k = (k as u64).min(n - k as u64);
    if k == 0 {
        return Ok(TrackedReal::exact(0.0));
    }
    if bits > 53 {
        return mp::log_binomial(n, k, bits);
    }
    if n >= (1 << 53) {
        return Err(Error::Overflow(format!(
            "binomial argument {n} exceeds the exact-integer range of f64"
        )));
    }
    if k <= 256 {
        // direct product: Σ ln((n-k+i)/i), every operand exact in f64
        let mut s = CompensatedSum::new();
        for i in 1..=k {
            let t = ((n - k + i) as f64 / i as f64).ln();
            s.add(t, (3.0 * t.abs() + 3.0) * U + 1e-300);
        }
        Ok(s.tracked())
    } else {
        let a = lgamma((n + 1) as f64)?;
        let b = lgamma((k + 1) as f64)?;
        let c = lgamma((n - k + 1) as f64)?;
        Ok(a.sub(&b).sub(&c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{binomial_exact, ratio_to_f64};
    use num_rational::Ratio;

    /// ln of a big integer through its top bits: independent of lgamma.
    fn ln_bigint(x: &num_bigint::BigInt) -> f64 {
        let bits = x.bits();
        if bits <= 60 {
            use num_traits::ToPrimitive;
            return x.to_f64().unwrap().ln();
        }
        let top: num_bigint::BigInt = x >> (bits - 60);
        use num_traits::ToPrimitive;
        top.to_f64().unwrap().ln() + (bits - 60) as f64 * std::f64::consts::LN_2
    }

    #[test]
    fn lgamma_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..30u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            let t = lgamma(n as f64).unwrap();
            assert!(
                (t.value() - fact.ln()).abs() <= t.abs_error() + 1e-12,
                "lgamma({n})"
            );
        }
    }

    #[test]
    fn log_binomial_small_cases() {
        let t = log_binomial(5, 2, 53).unwrap();
        assert!(t.contains(10f64.ln()));
        let z = log_binomial(0, 0, 53).unwrap();
        assert_eq!(z.value(), 0.0);
        assert_eq!(z.abs_error(), 0.0);
        assert!(log_binomial(5, 6, 53).is_err());
        assert!(log_binomial(5, -1, 53).is_err());
    }

    #[test]
    fn log_binomial_agrees_with_exact_bigint_oracle() {
        for &(n, k) in &[(1000u64, 500i64), (2000, 317), (5000, 2500), (400, 399)] {
            let t = log_binomial(n, k, 53).unwrap();
            let exact = ln_bigint(&binomial_exact(n, k));
            assert!(
                (t.value() - exact).abs() <= t.abs_error() + 1e-10,
                "n={n} k={k}: {} vs {exact} (±{})",
                t.value(),
                t.abs_error()
            );
        }
        // 113-bit rung agrees within its own (much smaller) bound
        let t = log_binomial(1000, 500, 113).unwrap();
        let exact = ln_bigint(&binomial_exact(1000, 500));
        assert!((t.value() - exact).abs() <= t.abs_error() + 1e-10);
        assert!(t.abs_error() < 1e-12);
    }

    #[test]
    fn log_binomial_exponential_consistency() {
        // exp(log C(31,15)) should reproduce the exact integer to f64 accuracy
        let t = log_binomial(31, 15, 53).unwrap();
        let approx = t.value().exp();
        let exact = ratio_to_f64(&Ratio::from(binomial_exact(31, 15)));
        assert!((approx - exact).abs() / exact < 1e-12);
    }
}
