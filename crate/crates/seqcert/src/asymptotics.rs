//! The most stringent pairwise case in closed form, the log-sum
//! decomposition of its binomial product-ratio, and the limit suites that
//! pin the asymptotic constants.
//!
//! Everything here lives on the shifted index `a` (the stringent case sits
//! at `j = 1`, `l = 4a² - 1`, with threshold `a - 1`), so `α = 1/a`.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::funcs::Value;
use crate::kernel::{binomial_exact, falling_factorial, CompensatedSum, NumericMode, TrackedReal};
use crate::{Error, ExactRational, Result};

const U: f64 = f64::EPSILON / 2.0;
const LN_2: f64 = std::f64::consts::LN_2;

fn validate_a(a: i64) -> Result<()> {
    if a < 2 {
        return Err(Error::domain(format!(
            "the stringent case needs shifted a >= 2, got {a}"
        )));
    }
    Ok(())
}

/// Left side of the stringent inequality, in closed falling-factorial form:
/// `(4a²+a-1)^(2a+1) (4a²+a)^(2a+2) / {(4a²-a-3)^(2a+1) (4a²+3a+2)^(2a+2)} - 1`.
pub fn stringent_lhs(a: i64, mode: NumericMode) -> Result<Value> {
    validate_a(a)?;
    match mode {
        NumericMode::Exact => {
            let num = falling_factorial(4 * a * a + a - 1, (2 * a + 1) as u32)
                * falling_factorial(4 * a * a + a, (2 * a + 2) as u32);
            let den = falling_factorial(4 * a * a - a - 3, (2 * a + 1) as u32)
                * falling_factorial(4 * a * a + 3 * a + 2, (2 * a + 2) as u32);
            Ok(Value::Exact(
                ExactRational::new(num, den) - ExactRational::one(),
            ))
        }
        NumericMode::Log { bits } => Ok(Value::Tracked(log_lhs_sum(a, bits)?.exp_m1()?)),
    }
}

/// Right side of the stringent inequality:
/// the bracket `{32a²(a²-1)-6}(4a+1)/(4a)` over
/// `(4a²+2)(4a²+1)(4a²-3)(a+1)`, times the binomial product-ratio.
pub fn stringent_rhs(a: i64, mode: NumericMode) -> Result<Value> {
    validate_a(a)?;
    let (bn, bd) = bracket_parts(a);
    match mode {
        NumericMode::Exact => {
            let bracket = ExactRational::new(BigInt::from(bn), BigInt::from(bd));
            match product_ratio(a, mode)? {
                Value::Exact(r) => Ok(Value::Exact(bracket * r)),
                _ => unreachable!(),
            }
        }
        NumericMode::Log { bits } => {
            let bracket = TrackedReal::from_ratio(bn, bd);
            match product_ratio(a, NumericMode::Log { bits })? {
                Value::Tracked(r) => Ok(Value::Tracked(bracket.mul(&r))),
                _ => unreachable!(),
            }
        }
    }
}

/// Numerator and denominator of the front bracket of the right side.
fn bracket_parts(a: i64) -> (i128, i128) {
    let a = a as i128;
    let num = (32 * a * a * (a * a - 1) - 6) * (4 * a + 1);
    let den = 4 * a * (4 * a * a + 2) * (4 * a * a + 1) * (4 * a * a - 3) * (a + 1);
    (num, den)
}

/// The binomial product-ratio
/// `C(8a²-1, 4a²-1) C(8a²-5, 4a²-1) / {C(8a²+2a-1, 4a²+a-1) C(8a²-2a-5, 4a²+a-1)}`.
///
/// The exact path multiplies the four coefficients outright. The log path
/// never forms them: it evaluates the rearrangement into the five
/// elementary-ratio sums (`L0 - L1 + 2L2 - L3 + 2L4`), whose summands are
/// logs of near-one rationals, and exponentiates — no large-log
/// cancellation anywhere.
pub fn product_ratio(a: i64, mode: NumericMode) -> Result<Value> {
    validate_a(a)?;
    match mode {
        NumericMode::Exact => {
            let a = a as u64;
            let s = 8 * a * a;
            let k = (4 * a * a + a - 1) as i64;
            let num = binomial_exact(s - 1, 4 * (a * a) as i64 - 1)
                * binomial_exact(s - 5, 4 * (a * a) as i64 - 1);
            let den = binomial_exact(s + 2 * a - 1, k) * binomial_exact(s - 2 * a - 5, k);
            Ok(Value::Exact(ExactRational::new(num, den)))
        }
        NumericMode::Log { .. } => {
            let t = log_ratio_terms(a)?;
            Ok(Value::Tracked(t.combination().exp()?))
        }
    }
}

/// The five elementary-ratio log sums whose combination equals the log of
/// the binomial product-ratio. Stored as residuals with the `±k·a·ln 2`
/// leading parts removed; those parts cancel exactly in the combination
/// `L0 - L1 + 2L2 - L3 + 2L4`.
#[derive(Debug, Clone, Serialize)]
pub struct LogRatioTerms {
    pub a: i64,
    /// `L0` (no leading part).
    pub l0: TrackedReal,
    /// `L1 - a ln 2`.
    pub l1_res: TrackedReal,
    /// `L2 - 3a ln 2`.
    pub l2_res: TrackedReal,
    /// `L3 - 3a ln 2`.
    pub l3_res: TrackedReal,
    /// `L4 + a ln 2`.
    pub l4_res: TrackedReal,
    /// Number of summands in `L4`, exactly `4a² - 3a - 4`.
    pub l4_summands: u64,
}

impl LogRatioTerms {
    /// `L0 - L1 + 2L2 - L3 + 2L4`; the `a ln 2` parts cancel exactly
    /// (coefficient `-1 + 6 - 3 - 2 = 0`), so only residuals enter.
    pub fn combination(&self) -> TrackedReal {
        self.l0
            .sub(&self.l1_res)
            .add(&self.l2_res.scale(2.0))
            .sub(&self.l3_res)
            .add(&self.l4_res.scale(2.0))
    }

    /// The full `L1` including its leading part (and likewise below).
    pub fn l1(&self) -> TrackedReal {
        self.full(1.0, &self.l1_res)
    }

    pub fn l2(&self) -> TrackedReal {
        self.full(3.0, &self.l2_res)
    }

    pub fn l3(&self) -> TrackedReal {
        self.full(3.0, &self.l3_res)
    }

    pub fn l4(&self) -> TrackedReal {
        self.full(-1.0, &self.l4_res)
    }

    fn full(&self, mult: f64, res: &TrackedReal) -> TrackedReal {
        let lead = mult * self.a as f64 * LN_2;
        res.add(&TrackedReal::new(lead, 2.0 * U * lead.abs()))
    }
}

/// Evaluates the five log sums. The `L4` sum has `4a² - 3a - 4` terms and is
/// chunked deterministically: fixed-size blocks are summed independently
/// (in parallel) and merged in block order, so the result is bit-identical
/// for any worker count.
pub fn log_ratio_terms(a: i64) -> Result<LogRatioTerms> {
    validate_a(a)?;
    let af = a as f64;

    // summand: ln(1 + num/(den0 + den_step·i)) with exact integer parts
    let term = |num: f64, den: f64| -> TrackedReal {
        let t = (num / den).ln_1p();
        TrackedReal::new(t, (4.0 * t.abs() + 2.0 * U) * U + 1e-300)
    };

    // L0 = Σ_{i=0}^{3} ln(1 - a/(8a²+a+i-4))
    let mut l0 = CompensatedSum::new();
    for i in 0..=3i64 {
        l0.add_tracked(term(-af, (8 * a * a + a + i - 4) as f64));
    }

    // L1 - a ln 2 = Σ_{i=1}^{a} ln(1 + (a-1-i)/(8a²+2i))
    let mut l1 = CompensatedSum::new();
    for i in 1..=a {
        l1.add_tracked(term((a - 1 - i) as f64, (8 * a * a + 2 * i) as f64));
    }

    // L2 - 3a ln 2 = Σ_{i=1}^{3a} ln(1 + (3a-i+3)/(8a²-6a+2i-8))
    let mut l2 = CompensatedSum::new();
    for i in 1..=3 * a {
        l2.add_tracked(term((3 * a - i + 3) as f64, (8 * a * a - 6 * a + 2 * i - 8) as f64));
    }

    // L3 - 3a ln 2 = Σ_{i=1}^{3a} ln(1 + (4a-i+3)/(8a²-6a+2i-8))
    let mut l3 = CompensatedSum::new();
    for i in 1..=3 * a {
        l3.add_tracked(term((4 * a - i + 3) as f64, (8 * a * a - 6 * a + 2 * i - 8) as f64));
    }

    // L4 + a ln 2 = Σ_{i=1}^{4a²-3a-4} ln(1 - a/(4a²+a+i-1)) + a ln 2,
    // regrouped pairwise against the ln 2 mass so partial sums stay small:
    // term_i' = ln(1 - a/(4a²+a+i-1)) + (a ln 2)/n is NOT exact; instead the
    // leading part is subtracted once at the end under compensation.
    let n4 = (4 * a * a - 3 * a - 4) as u64;
    const CHUNK: u64 = 1 << 16;
    let blocks: Vec<CompensatedSum> = (0..n4.div_ceil(CHUNK))
        .into_par_iter()
        .map(|b| {
            let mut s = CompensatedSum::new();
            let lo = b * CHUNK + 1;
            let hi = (lo + CHUNK - 1).min(n4);
            let base = (4 * a * a + a - 1) as f64;
            for i in lo..=hi {
                let t = (-af / (base + i as f64)).ln_1p();
                s.add(t, (4.0 * t.abs() + 2.0 * U) * U + 1e-300);
            }
            s
        })
        .collect();
    let mut l4 = CompensatedSum::new();
    for b in &blocks {
        l4.merge(b);
    }
    // l4 now holds L4 itself (~ -a ln 2); add the leading part back.
    let lead = af * LN_2;
    let l4_res = l4.tracked().add(&TrackedReal::new(lead, 2.0 * U * lead));

    Ok(LogRatioTerms {
        a,
        l0: l0.tracked(),
        l1_res: l1.tracked(),
        l2_res: l2.tracked(),
        l3_res: l3.tracked(),
        l4_res,
        l4_summands: n4,
    })
}

/// The five elementary-ratio products as exact rationals; their combination
/// `P0 · P2² · P4² / (P1 · P3)` reproduces the exact binomial product-ratio.
/// This is the exact-arithmetic mirror of [`log_ratio_terms`].
pub fn exact_factor_products(a: i64) -> Result<[ExactRational; 5]> {
    validate_a(a)?;
    let prod = |lo: i64, hi: i64, num: Box<dyn Fn(i64) -> i64>, den: Box<dyn Fn(i64) -> i64>| {
        let mut n = BigInt::one();
        let mut d = BigInt::one();
        for i in lo..=hi {
            n *= num(i);
            d *= den(i);
        }
        ExactRational::new(n, d)
    };
    let p0 = prod(
        0,
        3,
        Box::new(move |i| 8 * a * a + i - 4),
        Box::new(move |i| 8 * a * a + a + i - 4),
    );
    let p1 = prod(
        1,
        a,
        Box::new(move |i| 8 * a * a + a - 1 + i),
        Box::new(move |i| 4 * a * a + i),
    );
    let p2 = prod(
        1,
        3 * a,
        Box::new(move |i| 8 * a * a - 3 * a + i - 5),
        Box::new(move |i| 4 * a * a - 3 * a + i - 4),
    );
    let p3 = prod(
        1,
        3 * a,
        Box::new(move |i| 8 * a * a - 2 * a + i - 5),
        Box::new(move |i| 4 * a * a - 3 * a + i - 4),
    );
    let p4 = prod(
        1,
        4 * a * a - 3 * a - 4,
        Box::new(move |i| 4 * a * a + i - 1),
        Box::new(move |i| 4 * a * a + a + i - 1),
    );
    Ok([p0, p1, p2, p3, p4])
}

/// `log(1 + LHS)` as the two-series rearrangement of the closed form: each
/// summand is the log of a near-one rational, so the value survives in
/// floating point long after the raw falling factorials overflow.
pub fn log_lhs_sum(a: i64, _bits: u32) -> Result<TrackedReal> {
    validate_a(a)?;
    let mut s = CompensatedSum::new();
    let step = (2 * a + 2) as f64;
    for i in 0..=2 * a {
        // ln((4a²+a-1-i)/(4a²-a-3-i))
        let den = (4 * a * a - a - 3 - i) as f64;
        let t = (step / den).ln_1p();
        s.add(t, (4.0 * t.abs() + 2.0 * U) * U + 1e-300);
        // ln((4a²+a-i)/(4a²+3a+2-i))
        let den = (4 * a * a + 3 * a + 2 - i) as f64;
        let t = (-step / den).ln_1p();
        s.add(t, (4.0 * t.abs() + 2.0 * U) * U + 1e-300);
    }
    // the leftover factor of the second series at i = 2a+1
    let den = (4 * a * a + a + 1) as f64;
    let t = (-step / den).ln_1p();
    s.add(t, (4.0 * t.abs() + 2.0 * U) * U + 1e-300);
    Ok(s.tracked())
}

/// `log(1 + LHS)` as two exact rational products (the same rearrangement
/// evaluated without logs); returns `1 + LHS` itself.
pub fn exact_lhs_products(a: i64) -> Result<ExactRational> {
    validate_a(a)?;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..=2 * a {
        num *= 4 * a * a + a - 1 - i;
        den *= 4 * a * a - a - 3 - i;
    }
    for i in 0..=2 * a + 1 {
        num *= 4 * a * a + a - i;
        den *= 4 * a * a + 3 * a + 2 - i;
    }
    Ok(ExactRational::new(num, den))
}

/// Reference values of the binomial product-ratio at the standard
/// checkpoints (4-5 significant digits; fixtures accept ±5·10⁻⁵).
pub const RATIO_REFERENCE: [(i64, f64); 4] =
    [(10, 3.2737), (100, 2.7665), (1000, 2.7230), (5000, 2.7189)];

/// Exact rational enclosure of Euler's number from the factorial series
/// with a tail bound: `Σ_{k<=n} 1/k! < e < Σ_{k<=n} 1/k! + 2/(n+1)!`.
pub fn e_bounds() -> (ExactRational, ExactRational) {
    let n = 22u32;
    let mut sum = ExactRational::zero();
    let mut fact = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            fact *= k;
        }
        sum += ExactRational::new(BigInt::one(), fact.clone());
    }
    let tail = ExactRational::new(BigInt::from(2), fact * (n + 1));
    (sum.clone(), sum + tail)
}

use num_traits::Zero;

/// One row of a limit suite: a scaled quantity, its limit constant, and the
/// sequence-level convergence flag.
#[derive(Debug, Clone, Serialize)]
pub struct LimitRow {
    pub a: i64,
    pub metric: String,
    pub value: f64,
    pub target: f64,
    pub converged: bool,
}

/// Per-`a` rows for the five log-sum constants and their combination:
/// `L0 -> 0`, `L1 - a ln 2 -> 1/16`, `L2 - 3a ln 2 -> 9/16`,
/// `L3 - 3a ln 2 -> 15/16`, `L4 + a ln 2 -> 7/16`, combination `-> 1`.
pub fn term_limit_rows(a_values: &[i64]) -> Result<Vec<LimitRow>> {
    if a_values.is_empty() || a_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("a values must be strictly increasing"));
    }
    let mut per_metric: Vec<(&str, f64, f64, Vec<f64>)> = vec![
        ("l0", 0.0, 2.0, Vec::new()),
        ("l1-residual", 1.0 / 16.0, 2.0, Vec::new()),
        ("l2-residual", 9.0 / 16.0, 4.0, Vec::new()),
        ("l3-residual", 15.0 / 16.0, 4.0, Vec::new()),
        ("l4-residual", 7.0 / 16.0, 4.0, Vec::new()),
        ("combination", 1.0, 8.0, Vec::new()),
    ];
    for &a in a_values {
        let t = log_ratio_terms(a)?;
        let values = [
            t.l0.value(),
            t.l1_res.value(),
            t.l2_res.value(),
            t.l3_res.value(),
            t.l4_res.value(),
            t.combination().value(),
        ];
        for (slot, v) in per_metric.iter_mut().zip(values) {
            slot.3.push(v);
        }
    }
    Ok(collect_metric_rows(a_values, &per_metric))
}

fn collect_metric_rows(
    a_values: &[i64],
    per_metric: &[(&str, f64, f64, Vec<f64>)],
) -> Vec<LimitRow> {
    let mut rows = Vec::new();
    for (metric, target, band_c, values) in per_metric {
        let devs: Vec<f64> = values.iter().map(|v| (v - target).abs()).collect();
        let monotone = devs.windows(2).all(|w| w[1] < w[0]);
        let final_ok = devs.last().unwrap() <= &(band_c / *a_values.last().unwrap() as f64);
        let converged = monotone && final_ok;
        for (&a, &v) in a_values.iter().zip(values) {
            rows.push(LimitRow {
                a,
                metric: metric.to_string(),
                value: v,
                target: *target,
                converged,
            });
        }
    }
    rows.sort_by(|x, y| (x.a, x.metric.as_str()).cmp(&(y.a, y.metric.as_str())));
    rows
}

/// Scaled limit quantities along an increasing list of `a` values:
/// `a²·LHS -> 1`, `a³(LHS - α²) -> 19/12`, `a³·RHS -> e/2` and
/// `gap/α² -> 1`. A metric is flagged converged when its deviation from the
/// target shrinks monotonically along the list and the final deviation sits
/// inside the calibrated `C/a` band.
pub fn limit_suite(a_values: &[i64], mode: NumericMode) -> Result<Vec<LimitRow>> {
    if a_values.is_empty() || a_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("a values must be strictly increasing"));
    }
    if a_values[0] < 10 {
        return Err(Error::domain("limit suite needs a >= 10"));
    }
    let bits = match mode {
        NumericMode::Exact => 53, // scaled limits are floating by nature
        NumericMode::Log { bits } => bits,
    };
    let e_half = std::f64::consts::E / 2.0;
    let mut per_metric: Vec<(&str, f64, f64, Vec<f64>)> = vec![
        ("a2-lhs", 1.0, 4.0, Vec::new()),
        ("a3-lhs-correction", 19.0 / 12.0, 8.0, Vec::new()),
        ("a3-rhs", e_half, 8.0, Vec::new()),
        ("gap-over-alpha2", 1.0, 2.0, Vec::new()),
    ];
    for &a in a_values {
        let af = a as f64;
        let lhs = log_lhs_sum(a, bits)?.exp_m1()?;
        let rhs = match stringent_rhs(a, NumericMode::Log { bits })? {
            Value::Tracked(t) => t,
            _ => unreachable!(),
        };
        let alpha2 = TrackedReal::from_ratio(1, (a * a) as i128);
        let values = [
            lhs.scale(af * af).value(),
            lhs.sub(&alpha2).scale(af * af * af).value(),
            rhs.scale(af * af * af).value(),
            lhs.sub(&rhs).div(&alpha2)?.value(),
        ];
        for (slot, v) in per_metric.iter_mut().zip(values) {
            slot.3.push(v);
        }
    }
    Ok(collect_metric_rows(a_values, &per_metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::ratio_to_f64;
    use crate::pairwise;

    const EXACT: NumericMode = NumericMode::Exact;

    fn exact_of(v: Value) -> ExactRational {
        match v {
            Value::Exact(r) => r,
            _ => panic!("expected exact value"),
        }
    }

    #[test]
    fn stringent_sides_match_pairwise_cells() {
        for a in 2..=8i64 {
            let l = 4 * a * a - 1;
            let lhs = exact_of(stringent_lhs(a, EXACT).unwrap());
            let rhs = exact_of(stringent_rhs(a, EXACT).unwrap());
            let plhs = exact_of(pairwise::pair_lhs(a - 1, 1, l, EXACT).unwrap());
            let prhs = exact_of(pairwise::pair_rhs(a - 1, 1, l, EXACT).unwrap());
            assert_eq!(lhs, plhs, "lhs at a={a}");
            assert_eq!(rhs, prhs, "rhs at a={a}");
        }
        assert!(stringent_lhs(1, EXACT).is_err());
    }

    #[test]
    fn stringent_difference_at_shifted_eleven() {
        let lhs = exact_of(stringent_lhs(11, EXACT).unwrap());
        let rhs = exact_of(stringent_rhs(11, EXACT).unwrap());
        let gap = ratio_to_f64(&(lhs - rhs));
        assert!((gap - 0.008467).abs() < 5e-7);
    }

    #[test]
    fn factor_products_reproduce_the_ratio() {
        for a in [2i64, 3, 5, 10] {
            let [p0, p1, p2, p3, p4] = exact_factor_products(a).unwrap();
            let combined = p0 * (&p2 * &p2) * (&p4 * &p4) / (p1 * p3);
            let direct = exact_of(product_ratio(a, EXACT).unwrap());
            assert_eq!(combined, direct, "a={a}");
        }
    }

    #[test]
    fn lhs_products_match_closed_form() {
        for a in [2i64, 5, 12] {
            let products = exact_lhs_products(a).unwrap();
            let closed = exact_of(stringent_lhs(a, EXACT).unwrap()) + ExactRational::one();
            assert_eq!(products, closed, "a={a}");
        }
    }

    #[test]
    fn log_sum_agrees_with_exact_products() {
        for a in [2i64, 5, 20, 50] {
            let t = log_lhs_sum(a, 53).unwrap();
            let exact = ratio_to_f64(&exact_lhs_products(a).unwrap()).ln();
            assert!(
                (t.value() - exact).abs() <= t.abs_error() + 1e-12,
                "a={a}: {} vs {exact}",
                t.value()
            );
        }
        // scaled by a², the series tends to 1 (the α² leading term)
        let t = log_lhs_sum(200, 53).unwrap();
        assert!((t.value() * 200.0 * 200.0 - 1.0).abs() < 0.02);
    }

    #[test]
    fn ratio_log_path_matches_exact_path() {
        for a in [2i64, 5, 10, 20] {
            let exact = ratio_to_f64(&exact_of(product_ratio(a, EXACT).unwrap()));
            let t = match product_ratio(a, NumericMode::log(53).unwrap()).unwrap() {
                Value::Tracked(t) => t,
                _ => unreachable!(),
            };
            assert!(
                (t.value() - exact).abs() <= t.abs_error() + 1e-10,
                "a={a}: {} ± {} vs {exact}",
                t.value(),
                t.abs_error()
            );
        }
    }

    #[test]
    fn l4_summand_count_is_exact() {
        for a in [2i64, 3, 10, 40] {
            let t = log_ratio_terms(a).unwrap();
            assert_eq!(t.l4_summands, (4 * a * a - 3 * a - 4) as u64);
        }
    }

    #[test]
    fn reference_ratio_fixtures_fast_points() {
        for &(a, expect) in RATIO_REFERENCE.iter().take(2) {
            let t = match product_ratio(a, NumericMode::log(53).unwrap()).unwrap() {
                Value::Tracked(t) => t,
                _ => unreachable!(),
            };
            assert!(
                (t.value() - expect).abs() < 5e-5,
                "a={a}: {} vs {expect}",
                t.value()
            );
        }
    }

    #[test]
    fn term_constants_approach_their_limits() {
        let t = log_ratio_terms(2000).unwrap();
        assert!((t.l1_res.value() - 1.0 / 16.0).abs() < 1e-3, "{:?}", t.l1_res);
        assert!((t.l2_res.value() - 9.0 / 16.0).abs() < 2e-3);
        assert!((t.l3_res.value() - 15.0 / 16.0).abs() < 2e-3);
        assert!((t.l4_res.value() - 7.0 / 16.0).abs() < 2e-3);
        assert!(t.l0.value().abs() < 1e-3);
        assert!((t.combination().value() - 1.0).abs() < 5e-3);
    }

    #[test]
    fn decisive_constant_inequality() {
        // 19/12 > e/2, via the exact enclosure of e
        let (_, e_hi) = e_bounds();
        let nineteen_twelfths =
            ExactRational::new(BigInt::from(19), BigInt::from(12));
        assert!(nineteen_twelfths > e_hi / ExactRational::from(BigInt::from(2)));
        let (e_lo, e_hi) = e_bounds();
        assert!(e_lo < e_hi);
        let e = std::f64::consts::E;
        assert!(ratio_to_f64(&e_lo) <= e && e <= ratio_to_f64(&e_hi));
    }

    #[test]
    fn limit_suite_small_run() {
        let rows = limit_suite(&[10, 20, 40], EXACT).unwrap();
        assert_eq!(rows.len(), 12);
        let lhs_rows: Vec<&LimitRow> =
            rows.iter().filter(|r| r.metric == "a2-lhs").collect();
        // a²·LHS approaches 1 from above
        assert!(lhs_rows.iter().all(|r| r.value > 1.0));
        assert!(limit_suite(&[5, 10], EXACT).is_err());
        assert!(limit_suite(&[20, 10], EXACT).is_err());
    }
}
