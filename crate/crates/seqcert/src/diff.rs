//! Forward-difference operators under the centered indexing convention,
//! closed-form cross-checks for the `h` differences, and the convexity
//! verification suites.
//!
//! Indexing convention: for a sequence indexed `j = 0..=τ`, the first
//! difference `Δf(j) = f(j+1) - f(j)` lives on `0..=τ-1`, while the second
//! difference is *centered*, `Δ²f(j) = f(j+1) - 2f(j) + f(j-1)`, so that its
//! starting index is `j = 1` (range `1..=τ-1`), and `Δ³f(j) = Δ²f(j+1) -
//! Δ²f(j)` lives on `1..=τ-2`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::funcs::{self, EvalPoint};
use crate::kernel::{falling_factorial, NumericMode, Sign, TrackedReal};
use crate::report::{CheckItem, VerificationReport, Witness};
use crate::{Error, ExactRational, Result};

/// A sequence of exact values indexed `j = 0..=τ` for a given `l`.
#[derive(Debug, Clone)]
pub struct DiffSequence {
    pub l: i64,
    values: Vec<ExactRational>,
}

impl DiffSequence {
    pub fn new(l: i64, values: Vec<ExactRational>) -> Result<Self> {
        let expect = funcs::tau(l) + 1;
        if values.len() as i64 != expect {
            return Err(Error::domain(format!(
                "sequence for l={l} must have {expect} entries (j = 0..=τ), got {}",
                values.len()
            )));
        }
        Ok(DiffSequence { l, values })
    }

    /// The `h` sequence `j = 0..=τ`.
    pub fn h(l: i64) -> Result<Self> {
        let t = funcs::tau(l);
        let values = (0..=t)
            .map(|j| EvalPoint::new(l, j).map(funcs::h_exact))
            .collect::<Result<_>>()?;
        DiffSequence::new(l, values)
    }

    /// The `g` sequence `j = 0..=τ`.
    pub fn g(l: i64) -> Result<Self> {
        let t = funcs::tau(l);
        let values = (0..=t)
            .map(|j| EvalPoint::new(l, j).map(funcs::g_exact))
            .collect::<Result<_>>()?;
        DiffSequence::new(l, values)
    }

    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    pub fn delta(&self, j: i64) -> Result<ExactRational> {
        let t = self.values.len() as i64 - 1;
        if j < 0 || j > t - 1 {
            return Err(Error::index(format!("Δ index {j} outside 0..={}", t - 1)));
        }
        Ok(delta_at(&self.values, j as usize))
    }

    pub fn delta2(&self, j: i64) -> Result<ExactRational> {
        let t = self.values.len() as i64 - 1;
        if j < 1 || j > t - 1 {
            return Err(Error::index(format!("Δ² index {j} outside 1..={}", t - 1)));
        }
        Ok(delta2_at(&self.values, j as usize))
    }

    pub fn delta3(&self, j: i64) -> Result<ExactRational> {
        let t = self.values.len() as i64 - 1;
        if j < 1 || j > t - 2 {
            return Err(Error::index(format!("Δ³ index {j} outside 1..={}", t - 2)));
        }
        Ok(delta3_at(&self.values, j as usize))
    }
}

pub(crate) fn delta_at(v: &[ExactRational], j: usize) -> ExactRational {
    &v[j + 1] - &v[j]
}

pub(crate) fn delta2_at(v: &[ExactRational], j: usize) -> ExactRational {
    (&v[j + 1] - &v[j]) - (&v[j] - &v[j - 1])
}

pub(crate) fn delta3_at(v: &[ExactRational], j: usize) -> ExactRational {
    delta2_at(v, j + 1) - delta2_at(v, j)
}

/// Closed form `Δ²h(j) = 4l / (l-j+1)^(3)` for `1 <= j <= τ-1`.
pub fn delta2_h_closed(l: i64, j: i64) -> Result<ExactRational> {
    if j < 1 || j > funcs::tau(l) - 1 {
        return Err(Error::index(format!(
            "Δ²h index {j} outside 1..={}",
            funcs::tau(l) - 1
        )));
    }
    Ok(ExactRational::new(
        BigInt::from(4 * l),
        falling_factorial(l - j + 1, 3),
    ))
}

/// Closed form `Δ³h(j) = 12l / (l-j+1)^(4)` for `1 <= j <= τ-2`.
pub fn delta3_h_closed(l: i64, j: i64) -> Result<ExactRational> {
    if j < 1 || j > funcs::tau(l) - 2 {
        return Err(Error::index(format!(
            "Δ³h index {j} outside 1..={}",
            funcs::tau(l) - 2
        )));
    }
    Ok(ExactRational::new(
        BigInt::from(12 * l),
        falling_factorial(l - j + 1, 4),
    ))
}

/// The ratio numerators/denominators `r_j = A_j / B_j` for `j = 0..=τ-1`.
fn ratio_parts_vec(l: i64) -> Vec<(i128, i128)> {
    (0..funcs::tau(l))
        .map(|j| funcs::g_ratio_parts(l, j).expect("in-range ratio index"))
        .collect()
}

/// The convexity suite for a single `l`: monotonicity and the positivity of
/// second and third differences for both `h` and `g`, the separation of
/// their curvatures, and the derived `Δ²d > 0`.
///
/// In exact mode every sign is an integer comparison (second and third
/// differences of `g` are decided through its one-step ratios, which keeps
/// all but one comparison in machine-word products). In log mode the same
/// conditions run on tracked floats with the escalation ladder, falling back
/// to the exact comparison when a bound straddles zero.
pub fn verify_convexity(l: i64, mode: NumericMode) -> Result<VerificationReport> {
    EvalPoint::new(l, 0)?;
    let mut report = VerificationReport::new("convexity-suite", mode);
    let t = funcs::tau(l);
    let ratios = ratio_parts_vec(l);
    let wit = |j: i64, what: &str| {
        Witness::new(
            &[("l", l.to_string()), ("j", j.to_string())],
            what.to_string(),
        )
    };

    // (i) h increasing and Δ²h > 0. Δ²h(j) = 4l/(l-j+1)^(3): positive since
    // j <= τ-1 < l-1 keeps every falling-factorial factor positive; checked
    // directly from the sequence values all the same.
    let h: Vec<ExactRational> = (0..=t)
        .map(|j| funcs::h_exact(EvalPoint::new(l, j).unwrap()))
        .collect();
    let mut bad = Vec::new();
    for j in 0..t as usize {
        if h[j + 1] <= h[j] {
            bad.push(wit(j as i64, "h(j+1) <= h(j)"));
        }
    }
    report.push(CheckItem::of("h-increasing", bad.is_empty(), bad));
    let mut bad = Vec::new();
    for j in 1..t as usize {
        if !delta2_at(&h, j).is_positive() {
            bad.push(wit(j as i64, "Δ²h(j) <= 0"));
        }
    }
    report.push(CheckItem::of("h-curvature-positive", bad.is_empty(), bad));

    // (ii) Δ³h > 0 on 1..=τ-2
    let mut bad = Vec::new();
    for j in 1..(t - 1).max(1) as usize {
        if !delta3_at(&h, j).is_positive() {
            bad.push(wit(j as i64, "Δ³h(j) <= 0"));
        }
    }
    report.push(CheckItem::of("h-curvature-increasing", bad.is_empty(), bad));

    // (iii) g increasing (every one-step ratio exceeds 1) and Δ²g > 0
    let mut bad = Vec::new();
    for (j, &(a, b)) in ratios.iter().enumerate() {
        if a <= b {
            bad.push(wit(j as i64, "g(j+1)/g(j) <= 1"));
        }
    }
    report.push(CheckItem::of("g-increasing", bad.is_empty(), bad));
    let mut bad = Vec::new();
    for j in 1..t as usize {
        if certify_g_curvature(&ratios, j, mode) != Sign::Positive {
            bad.push(wit(j as i64, "Δ²g(j) <= 0"));
        }
    }
    report.push(CheckItem::of("g-curvature-positive", bad.is_empty(), bad));

    // (iv) Δ³g > 0 on 1..=τ-2
    let mut bad = Vec::new();
    for j in 1..(t - 1).max(1) as usize {
        if certify_g_third_difference(&ratios, j, mode) != Sign::Positive {
            bad.push(wit(j as i64, "Δ³g(j) <= 0"));
        }
    }
    report.push(CheckItem::of("g-curvature-increasing", bad.is_empty(), bad));

    // (v) Δ²g(1) > Δ²h(τ-1)
    let g1 = funcs::g_exact(EvalPoint::new(l, 1)?);
    let g2 = funcs::g_exact(EvalPoint::new(l, 2)?);
    let curve_g1 = &g2 - &g1 * BigInt::from(2) + ExactRational::one();
    let curve_h_max = delta2_h_closed(l, t - 1)?;
    report.push(CheckItem::of(
        "g-curvature-exceeds-h-curvature",
        curve_g1 > curve_h_max,
        vec![wit(1, "Δ²g(1) <= Δ²h(τ-1)")],
    ));

    // corollary: Δ²d(j) > 0, i.e. Δ²g(j) > Δ²h(j), via the running exact
    // product for g(j-1)
    let mut bad = Vec::new();
    let mut num = BigInt::one(); // numerator of g(j-1), unreduced
    let mut den = BigInt::one();
    for j in 1..t as usize {
        let (a0, b0) = ratios[j - 1];
        let (a1, b1) = ratios[j];
        // Δ²g(j) = g(j-1)·K/(B_j B_{j-1}) with K = A_jA_{j-1} - 2A_{j-1}B_j + B_jB_{j-1}
        let k = BigInt::from(a1) * a0 - BigInt::from(2 * a0) * b1 + BigInt::from(b1) * b0;
        let p = BigInt::from((l - j as i64 + 1) as i128)
            * ((l - j as i64) as i128 * (l - j as i64 - 1) as i128);
        let lhs = &num * &k * &p;
        let rhs = &den * BigInt::from(b1) * BigInt::from(b0) * BigInt::from(4 * l);
        if lhs <= rhs {
            bad.push(wit(j as i64, "Δ²d(j) <= 0"));
        }
        num *= BigInt::from(a0);
        den *= BigInt::from(b0);
    }
    report.push(CheckItem::of("d-curvature-positive", bad.is_empty(), bad));

    Ok(report)
}

/// Sign of `Δ²g(j)` through the ratio identity
/// `Δ²g(j)/g(j-1) = r_j r_{j-1} - 2 r_{j-1} + 1`.
fn certify_g_curvature(ratios: &[(i128, i128)], j: usize, mode: NumericMode) -> Sign {
    let (a0, b0) = ratios[j - 1];
    let (a1, b1) = ratios[j];
    let exact = || {
        let v = BigInt::from(a1) * a0 + BigInt::from(b1) * b0 - BigInt::from(2 * a0) * b1;
        big_sign(&v)
    };
    match mode {
        NumericMode::Exact => exact(),
        NumericMode::Log { bits } => {
            let tracked = |_bits: u32| {
                let r1 = TrackedReal::from_ratio(a1, b1);
                let r0inv = TrackedReal::from_ratio(b0, a0);
                r1.add(&r0inv).sub(&TrackedReal::exact(2.0))
            };
            crate::kernel::certify_with_ladder(bits, tracked, exact).0
        }
    }
}

/// Sign of `Δ³g(j)` through
/// `Δ³g(j)/g(j-1) = r_{j+1} r_j r_{j-1} - 3 r_j r_{j-1} + 3 r_{j-1} - 1`.
fn certify_g_third_difference(ratios: &[(i128, i128)], j: usize, mode: NumericMode) -> Sign {
    let (a0, b0) = ratios[j - 1];
    let (a1, b1) = ratios[j];
    let (a2, b2) = ratios[j + 1];
    let exact = || {
        let v = BigInt::from(a2) * a1 * a0 - BigInt::from(3 * a1) * a0 * b2
            + BigInt::from(3 * a0) * b2 * b1
            - BigInt::from(b2) * b1 * b0;
        big_sign(&v)
    };
    match mode {
        NumericMode::Exact => exact(),
        NumericMode::Log { bits } => {
            let tracked = |_bits: u32| {
                let r0 = TrackedReal::from_ratio(a0, b0);
                let r1 = TrackedReal::from_ratio(a1, b1);
                let r2 = TrackedReal::from_ratio(a2, b2);
                let three = TrackedReal::exact(3.0);
                r2.mul(&r1)
                    .mul(&r0)
                    .sub(&three.mul(&r1).mul(&r0))
                    .add(&three.mul(&r0))
                    .sub(&TrackedReal::exact(1.0))
            };
            crate::kernel::certify_with_ladder(bits, tracked, exact).0
        }
    }
}

fn big_sign(v: &BigInt) -> Sign {
    if v.is_positive() {
        Sign::Positive
    } else if v.is_negative() {
        Sign::Negative
    } else {
        Sign::Indeterminate
    }
}

/// Convexity of the real map `x ↦ f_{a,b}(x)` over a grid: the chord test
/// on consecutive triples (the positive second central difference, for a
/// uniformly spaced grid) plus the equivalent cubic positivity
/// `2a(1-a²)x³ + 3b(1-a²)x² + b³ > 0` at every grid point.
pub fn real_fn_convexity_check(
    a: &ExactRational,
    b: &ExactRational,
    grid: &[ExactRational],
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("real-fn-convexity", NumericMode::Exact);
    let f: Vec<ExactRational> = grid
        .iter()
        .map(|x| funcs::f_ab(a, b, x))
        .collect::<Result<_>>()?;

    let one = ExactRational::one();
    let a2 = a * a;
    let mut bad = Vec::new();
    for (idx, x) in grid.iter().enumerate() {
        let cubic = (&one - &a2)
            * (a * BigInt::from(2) * x * x * x + b * BigInt::from(3) * x * x)
            + b * b * b;
        if !cubic.is_positive() {
            bad.push(Witness::new(
                &[("x", x.to_string())],
                "cubic positivity fails",
            ));
        }
        let _ = idx;
    }
    report.push(CheckItem::of("cubic-positivity", bad.is_empty(), bad));

    let mut bad = Vec::new();
    for k in 1..grid.len().saturating_sub(1) {
        let (x0, x1, x2) = (&grid[k - 1], &grid[k], &grid[k + 1]);
        // chord test: f(x1)·(x2-x0) < f(x0)·(x2-x1) + f(x2)·(x1-x0)
        let lhs = &f[k] * (x2 - x0);
        let rhs = &f[k - 1] * (x2 - x1) + &f[k + 1] * (x1 - x0);
        if lhs >= rhs {
            bad.push(Witness::new(
                &[("x", x1.to_string())],
                "second central difference not positive",
            ));
        }
    }
    report.push(CheckItem::of("grid-convexity", bad.is_empty(), bad));
    Ok(report)
}

/// Preconditioned product rule for sequences: if `s` and `t` are positive,
/// increasing and convex, then so is their pointwise product (strictly,
/// in the difference sense). Precondition failures are reported rather
/// than thrown.
pub fn product_convexity_check(
    s: &[ExactRational],
    t: &[ExactRational],
) -> VerificationReport {
    let mut report = VerificationReport::new("product-convexity", NumericMode::Exact);
    let mut pre = Vec::new();
    for (name, seq) in [("s", s), ("t", t)] {
        if seq.len() < 3 {
            pre.push(Witness::new(
                &[("sequence", name.to_string())],
                "needs at least 3 entries",
            ));
            continue;
        }
        if let Some(i) = seq.iter().position(|v| !v.is_positive()) {
            pre.push(Witness::new(
                &[("sequence", name.to_string()), ("j", i.to_string())],
                "not positive",
            ));
        }
        if let Some(i) = (0..seq.len() - 1).find(|&i| seq[i + 1] <= seq[i]) {
            pre.push(Witness::new(
                &[("sequence", name.to_string()), ("j", i.to_string())],
                "not strictly increasing",
            ));
        }
        if let Some(i) = (1..seq.len() - 1).find(|&i| !delta2_at(seq, i).is_positive()) {
            pre.push(Witness::new(
                &[("sequence", name.to_string()), ("j", i.to_string())],
                "not strictly convex",
            ));
        }
    }
    if !pre.is_empty() {
        report.push(CheckItem::fail("preconditions", pre));
        return report;
    }
    report.push(CheckItem::pass("preconditions"));

    let prod: Vec<ExactRational> = s.iter().zip(t).map(|(a, b)| a * b).collect();
    let mut bad = Vec::new();
    for j in 0..prod.len() - 1 {
        if !delta_at(&prod, j).is_positive() {
            bad.push(Witness::new(&[("j", j.to_string())], "Δ(s·t) <= 0"));
        }
    }
    report.push(CheckItem::of("product-increasing", bad.is_empty(), bad));
    let mut bad = Vec::new();
    for j in 1..prod.len() - 1 {
        if !delta2_at(&prod, j).is_positive() {
            bad.push(Witness::new(&[("j", j.to_string())], "Δ²(s·t) <= 0"));
        }
    }
    report.push(CheckItem::of("product-convex", bad.is_empty(), bad));
    report
}

/// The one-step ratio of `g` is positive, increasing and convex in `j`; its
/// continuous log has positive first and second derivatives at the integer
/// points, verified through the grouped-fraction signs.
pub fn ratio_convexity_check(l: i64) -> Result<VerificationReport> {
    EvalPoint::new(l, 0)?;
    let mut report = VerificationReport::new("ratio-convexity", NumericMode::Exact);
    let t = funcs::tau(l);
    let ratios: Vec<ExactRational> = (0..t).map(|j| funcs::g_ratio(l, j).unwrap()).collect();
    let wit = |j: i64, what: &str| {
        Witness::new(
            &[("l", l.to_string()), ("j", j.to_string())],
            what.to_string(),
        )
    };

    // domain guard: every integer point j <= τ-1 satisfies 3j < l-2, so all
    // grouped denominators below are positive
    let guard_ok = 3 * (t - 1) < l - 2;
    report.push(CheckItem::of(
        "domain-guard",
        guard_ok,
        vec![wit(t - 1, "3(τ-1) >= l-2")],
    ));

    let mut bad = Vec::new();
    for j in 0..(t - 1) as usize {
        if ratios[j + 1] <= ratios[j] {
            bad.push(wit(j as i64, "ratio not increasing"));
        }
    }
    report.push(CheckItem::of("ratio-increasing", bad.is_empty(), bad));

    let mut bad = Vec::new();
    for j in 1..(t - 1) as usize {
        if !delta2_at(&ratios, j).is_positive() {
            bad.push(wit(j as i64, "Δ²ratio <= 0"));
        }
    }
    report.push(CheckItem::of("ratio-convex", bad.is_empty(), bad));

    // grouped-term signs of the log-derivative at integer points:
    // L'(x)/3 = [1/(x+l+1) - 1/(3x+l+1)] + [1/(l-3x) - 1/(l-x)]
    //         + [1/(l-1-3x) - 1/(3x+l+3)] + [1/(l-2-3x) - 1/(3x+l+2)]
    // each bracket is nonnegative (the last two strictly positive), because
    // for p, q > 0: 1/p - 1/q >= 0 iff q >= p.
    let mut bad = Vec::new();
    for x in 0..t {
        let pairs = [
            (x + l + 1, 3 * x + l + 1, false),
            (l - 3 * x, l - x, false),
            (l - 1 - 3 * x, 3 * x + l + 3, true),
            (l - 2 - 3 * x, 3 * x + l + 2, true),
        ];
        for (p, q, strict) in pairs {
            if p <= 0 || q <= 0 || (strict && q <= p) || (!strict && q < p) {
                bad.push(wit(x, "log-derivative group not positive"));
            }
        }
    }
    report.push(CheckItem::of(
        "log-derivative-positive",
        bad.is_empty(),
        bad,
    ));

    // L''(x)/3 = [3/(3x+l+1)² - 1/(x+l+1)²] + [3/(l-3x)² - 1/(l-x)²] + (positive terms):
    // the brackets are positive iff 3(x+l+1)² > (3x+l+1)² and 3(l-x)² > (l-3x)².
    let mut bad = Vec::new();
    for x in 0..t {
        let c1 = 3 * (x + l + 1) * (x + l + 1) > (3 * x + l + 1) * (3 * x + l + 1);
        let c2 = 3 * (l - x) * (l - x) > (l - 3 * x) * (l - 3 * x);
        if !(c1 && c2) {
            bad.push(wit(x, "log-second-derivative group not positive"));
        }
    }
    report.push(CheckItem::of(
        "log-second-derivative-positive",
        bad.is_empty(),
        bad,
    ));

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> ExactRational {
        ExactRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn operators_on_simple_sequences() {
        let constant = DiffSequence::new(9, vec![rat(3, 1); 4]).unwrap();
        for j in 0..3 {
            assert!(constant.delta(j).unwrap().is_zero());
        }
        let linear = DiffSequence::new(9, (0..4).map(|j| rat(j, 1)).collect()).unwrap();
        for j in 1..3 {
            assert!(linear.delta2(j).unwrap().is_zero());
        }
        assert!(linear.delta(3).is_err());
        assert!(linear.delta2(0).is_err());
        assert!(linear.delta3(2).is_err());
    }

    #[test]
    fn h_second_difference_example() {
        let h6 = DiffSequence::h(6).unwrap();
        assert_eq!(h6.delta2(1).unwrap(), rat(1, 5));
        assert_eq!(delta2_h_closed(6, 1).unwrap(), rat(1, 5));
    }

    #[test]
    fn closed_forms_match_direct_differences() {
        let l = 30;
        let h = DiffSequence::h(l).unwrap();
        for j in 1..funcs::tau(l) {
            assert_eq!(delta2_h_closed(l, j).unwrap(), h.delta2(j).unwrap());
        }
        for j in 1..funcs::tau(l) - 1 {
            assert_eq!(delta3_h_closed(l, j).unwrap(), h.delta3(j).unwrap());
            // Δ of the closed Δ² equals the closed Δ³
            let step = delta2_h_closed(l, j + 1).unwrap() - delta2_h_closed(l, j).unwrap();
            assert_eq!(step, delta3_h_closed(l, j).unwrap());
        }
        assert!(delta2_h_closed(l, 0).is_err());
        assert!(delta3_h_closed(l, funcs::tau(l) - 1).is_err());
    }

    #[test]
    fn delta3_closed_example_and_positivity() {
        assert_eq!(
            delta3_h_closed(9, 1).unwrap(),
            ExactRational::new(BigInt::from(108), BigInt::from(9 * 8 * 7 * 6))
        );
        for l in [6i64, 30, 100, 300] {
            for j in 1..funcs::tau(l) - 1 {
                assert!(delta3_h_closed(l, j).unwrap().is_positive());
            }
        }
    }

    #[test]
    fn convexity_suite_passes_small_and_medium_l() {
        for l in [6i64, 7, 9, 30, 256] {
            let r = verify_convexity(l, NumericMode::Exact).unwrap();
            assert!(r.passed(), "l={l}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn convexity_suite_log_mode_agrees() {
        for l in [60i64, 256] {
            let r = verify_convexity(l, NumericMode::log(53).unwrap()).unwrap();
            assert!(r.passed(), "l={l}");
        }
    }

    #[test]
    fn curvature_ordering_chain_at_l_100() {
        // Δ²g(j) >= Δ²g(1) > Δ²h(τ-1) >= Δ²h(j) for every interior j
        let l = 100;
        let g = DiffSequence::g(l).unwrap();
        let h = DiffSequence::h(l).unwrap();
        let g1 = g.delta2(1).unwrap();
        let h_max = delta2_h_closed(l, funcs::tau(l) - 1).unwrap();
        assert!(g1 > h_max);
        for j in 1..funcs::tau(l) {
            assert!(g.delta2(j).unwrap() >= g1, "j={j}");
            assert!(h.delta2(j).unwrap() <= h_max, "j={j}");
        }
    }

    #[test]
    fn real_fn_convexity_examples() {
        let half = rat(1, 2);
        // 100 points in (0, 6) for a=1/2, b=3
        let grid: Vec<ExactRational> = (1..=100).map(|k| rat(6 * k, 101)).collect();
        let r = real_fn_convexity_check(&half, &rat(3, 1), &grid).unwrap();
        assert!(r.passed());

        // a=0, b=1 near the right end of (0, 1): cubic reduces to 3x² + 1
        let grid: Vec<ExactRational> = (90..100).map(|k| rat(k, 100)).collect();
        let r = real_fn_convexity_check(&rat(0, 1), &rat(1, 1), &grid).unwrap();
        assert!(r.passed());

        // the instantiation used by the g product: a=1/2, b=(l-i)/2
        let l = 20;
        for i in 0..=5 {
            let b = rat(l - i, 2);
            let grid: Vec<ExactRational> =
                (1..=50).map(|k| rat((l - i) * k, 51)).collect();
            let r = real_fn_convexity_check(&half, &b, &grid).unwrap();
            assert!(r.passed(), "i={i}");
        }

        // out-of-domain grid point is an error, not a failure report
        assert!(
            real_fn_convexity_check(&rat(0, 1), &rat(1, 1), &[rat(2, 1)]).is_err()
        );
    }

    #[test]
    fn product_convexity_examples() {
        let geometric: Vec<ExactRational> = [1, 2, 4, 8].iter().map(|&n| rat(n, 1)).collect();
        assert!(product_convexity_check(&geometric, &geometric).passed());

        // the instantiation from the proof that Δg is convex: s = g, t = ratio - 1
        let l = 60;
        let t_len = funcs::tau(l);
        let s: Vec<ExactRational> = (0..t_len)
            .map(|j| funcs::g_exact(EvalPoint::new(l, j).unwrap()))
            .collect();
        let t: Vec<ExactRational> = (0..t_len)
            .map(|j| funcs::g_ratio(l, j).unwrap() - ExactRational::one())
            .collect();
        assert!(product_convexity_check(&s, &t).passed());

        // linear sequence: precondition failure reported, not thrown
        let linear: Vec<ExactRational> = [1, 2, 3].iter().map(|&n| rat(n, 1)).collect();
        let r = product_convexity_check(&linear, &geometric[..3].to_vec());
        assert!(!r.passed());
        assert!(r.items.iter().any(|i| i.name == "preconditions"
            && i.witnesses.iter().any(|w| w.detail.contains("convex"))));
    }

    #[test]
    fn ratio_convexity_examples() {
        for l in [12i64, 100] {
            let r = ratio_convexity_check(l).unwrap();
            assert!(r.passed(), "l={l}");
        }
    }
}
