//! The central sequence functions: the product-form `g`, the linear
//! fractional `h`, their difference `d = g - h`, the one-step ratio of `g`,
//! the convex building block `f_ab`, and the weight distribution `q` with
//! its expectation decomposition.
//!
//! Every function exists in the exact rational domain; the cancellation-prone
//! ones also have tracked floating versions for large parameters.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::kernel::{self, binomial_exact, CompensatedSum, NumericMode, Sign, TrackedReal};
use crate::{Error, ExactRational, Result};

const U: f64 = f64::EPSILON / 2.0;

/// A validated evaluation point `(l, j)` with `l >= 6` and `0 <= j <= τ`,
/// where `τ = ⌊l/3⌋`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalPoint {
    l: i64,
    j: i64,
}

impl EvalPoint {
    pub fn new(l: i64, j: i64) -> Result<Self> {
        if l < 6 {
            return Err(Error::InvalidPoint {
                l,
                j,
                reason: "l must be at least 6",
            });
        }
        if j < 0 || j > l / 3 {
            return Err(Error::InvalidPoint {
                l,
                j,
                reason: "j must satisfy 0 <= j <= floor(l/3)",
            });
        }
        Ok(EvalPoint { l, j })
    }

    pub fn l(&self) -> i64 {
        self.l
    }

    pub fn j(&self) -> i64 {
        self.j
    }

    pub fn tau(&self) -> i64 {
        self.l / 3
    }
}

/// Upper index limit `τ = ⌊l/3⌋`.
pub fn tau(l: i64) -> i64 {
    l / 3
}


/// `g` as the product `Π_{i=0}^{2j-1} (l+j-i)^2 / {(l+j-i)^2 - 4j^2}`;
/// the empty product gives `g = 1` at `j = 0`.
pub fn g_exact(p: EvalPoint) -> ExactRational {
    let (l, j) = (p.l as i128, p.j as i128);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..2 * j {
        let x = l + j - i;
        num *= x * x;
        den *= (x - 2 * j) * (x + 2 * j);
    }
    ExactRational::new(num, den)
}

/// `h = (l+j)/(l-j)`, with `h = 1` at `j = 0`.
pub fn h_exact(p: EvalPoint) -> ExactRational {
    ExactRational::new(BigInt::from(p.l + p.j), BigInt::from(p.l - p.j))
}

/// `d = g - h` exactly.
pub fn d_exact(p: EvalPoint) -> ExactRational {
    g_exact(p) - h_exact(p)
}

/// The one-step ratio `g(l, j+1)/g(l, j)` in closed form:
/// `(l+j+1)^3 (l-j)^3 / {(l+3j+3)^(3) (l-3j)^(3)}`.
///
/// Valid for `0 <= j <= τ - 1`.
pub fn g_ratio(l: i64, j: i64) -> Result<ExactRational> {
    let (num, den) = g_ratio_parts(l, j)?;
    Ok(ExactRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Numerator and denominator of the one-step ratio as machine integers.
/// The sixth-power products exceed i128 past l ~ 2·10^6, which is reported
/// rather than wrapped.
pub fn g_ratio_parts(l: i64, j: i64) -> Result<(i128, i128)> {
    if l < 6 || j < 0 || j > tau(l) - 1 {
        return Err(Error::index(format!(
            "ratio index j={j} outside 0..={} for l={l}",
            tau(l) - 1
        )));
    }
    if l > 2_000_000 {
        return Err(Error::Overflow(format!(
            "one-step ratio parts exceed i128 for l={l}"
        )));
    }
    let (l, j) = (l as i128, j as i128);
    let num = (l + j + 1).pow(3) * (l - j).pow(3);
    let den = (l + 3 * j + 3) * (l + 3 * j + 2) * (l + 3 * j + 1) * (l - 3 * j) * (l - 3 * j - 1)
        * (l - 3 * j - 2);
    Ok((num, den))
}

/// The convex building block `f_{a,b}(x) = 1 / {(a + b/x)^2 - 1}` on
/// `0 < x < b/(1-a)`, for `0 <= a < 1` and `b > 0`.
pub fn f_ab(a: &ExactRational, b: &ExactRational, x: &ExactRational) -> Result<ExactRational> {
    let one = ExactRational::one();
    if a.is_negative() || a >= &one {
        return Err(Error::domain(format!("f_ab requires 0 <= a < 1, got {a}")));
    }
    if !b.is_positive() {
        return Err(Error::domain(format!("f_ab requires b > 0, got {b}")));
    }
    let limit = b / (&one - a);
    if !x.is_positive() || x >= &limit {
        return Err(Error::domain(format!(
            "f_ab argument {x} outside (0, {limit})"
        )));
    }
    // x^2 / {(a x + b)^2 - x^2}
    let ax_b = a * x + b;
    let x2 = x * x;
    let den = &ax_b * &ax_b - &x2;
    Ok(x2 / den)
}

/// `log g` with a tracked error bound. Dispatches to the multi-precision
/// rung for `bits > 53`.
pub fn log_g(l: i64, j: i64, bits: u32) -> Result<TrackedReal> {
    EvalPoint::new(l, j)?;
    if bits > 53 {
        return Ok(kernel::mp::log_g(l, j, bits));
    }
    let mut s = CompensatedSum::new();
    for i in 0..2 * j {
        let x = l + j - i;
        s.add_tracked(log_g_term(x, j));
    }
    Ok(s.tracked())
}

/// One factor `ln{x^2 / (x^2 - 4j^2)}` of `log g`, with its rounding bound.
fn log_g_term(x: i64, j: i64) -> TrackedReal {
    let (xi, ji) = (x as i128, j as i128);
    if xi * xi < 8 * ji * ji {
        // the factor is >= 2: difference of plain logs, no amplification.
        // four log evaluations at <= 2 ulp each plus two subtraction
        // roundings stay under 16 u ln(x) + 4 u
        let t = 2.0 * (x as f64).ln() - ((x - 2 * j) as f64).ln() - ((x + 2 * j) as f64).ln();
        TrackedReal::new(t, U * (16.0 * (x as f64).ln() + 4.0) + 1e-300)
    } else {
        // tiny factor: ln1p of the small exact ratio
        let u = 4.0 * (j as f64) * (j as f64) / (((x - 2 * j) as f64) * ((x + 2 * j) as f64));
        let t = u.ln_1p();
        TrackedReal::new(t, (8.0 * t.abs() + 3.0 * U * u) * U + 1e-300)
    }
}

/// `log h = ln(1 + j/l) - ln(1 - j/l)` with a tracked bound; accurate even
/// when the value is far below the magnitude of its parts.
pub fn log_h(l: i64, j: i64, _bits: u32) -> Result<TrackedReal> {
    EvalPoint::new(l, j)?;
    let r = j as f64 / l as f64;
    let v = r.ln_1p() - (-r).ln_1p();
    Ok(TrackedReal::new(
        v,
        U * (4.0 * r + 4.0 * v.abs()) + 1e-300,
    ))
}

/// `log g - log h` with a tracked bound; the quantity whose sign decides
/// `d < 0` versus `d > 0`.
pub fn log_gh_diff(l: i64, j: i64, bits: u32) -> Result<TrackedReal> {
    if bits > 53 {
        EvalPoint::new(l, j)?;
        return Ok(kernel::mp::log_gh_diff(l, j, bits));
    }
    Ok(log_g(l, j, bits)?.sub(&log_h(l, j, bits)?))
}

/// Certified sign of `d(l, j)`.
///
/// In log mode the sign is decided by the tracked `log g - log h` with the
/// escalation ladder (53 → 113 → 256 bits → exact); in exact mode by one
/// integer comparison.
pub fn d_sign(l: i64, j: i64, mode: NumericMode) -> Result<Sign> {
    let p = EvalPoint::new(l, j)?;
    if p.j == 0 {
        return Ok(Sign::Indeterminate); // d(l, 0) = 0: no strict sign
    }
    match mode {
        NumericMode::Exact => Ok(d_sign_exact(p)),
        NumericMode::Log { bits } => {
            let (sign, _) = kernel::certify_with_ladder(
                bits,
                |b| log_gh_diff(l, j, b).unwrap_or(TrackedReal::new(f64::NAN, f64::INFINITY)),
                || d_sign_exact(p),
            );
            Ok(sign)
        }
    }
}

fn d_sign_exact(p: EvalPoint) -> Sign {
    let g = g_exact(p);
    // g - (l+j)/(l-j) has the sign of numer(g)·(l-j) - denom(g)·(l+j)
    let lhs = g.numer() * BigInt::from(p.l - p.j);
    let rhs = g.denom() * BigInt::from(p.l + p.j);
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => Sign::Positive,
        std::cmp::Ordering::Less => Sign::Negative,
        std::cmp::Ordering::Equal => Sign::Indeterminate,
    }
}

/// Unnormalized weights `w(j) = j(l-j)/(l+j)^2 · C(2(l+j)-1, l+j-1) ·
/// C(4l-1-2(l+j), l+j-1)` for `j = 1..=τ`, as exact rationals.
pub fn weights_exact(l: i64) -> Result<Vec<ExactRational>> {
    EvalPoint::new(l, 0)?;
    let t = tau(l);
    let mut out = Vec::with_capacity(t as usize);
    for j in 1..=t {
        let c1 = binomial_exact((2 * (l + j) - 1) as u64, l + j - 1);
        let c2 = binomial_exact((4 * l - 1 - 2 * (l + j)) as u64, l + j - 1);
        let num = BigInt::from(j as i128 * (l - j) as i128) * c1 * c2;
        let den = BigInt::from((l + j) as i128 * (l + j) as i128);
        out.push(ExactRational::new(num, den));
    }
    Ok(out)
}

/// The normalized weight distribution `q(l, ·)` over `j = 1..=τ`
/// (index 0 of the result corresponds to `j = 1`).
pub fn q_exact(l: i64) -> Result<Vec<ExactRational>> {
    let w = weights_exact(l)?;
    let total: ExactRational = w.iter().sum();
    Ok(w.into_iter().map(|x| x / &total).collect())
}

/// Single weight `q(l, j)` in the requested mode.
pub fn q(l: i64, j: i64, mode: NumericMode) -> Result<Value> {
    if j < 1 || j > tau(l) {
        return Err(Error::index(format!("q index j={j} outside 1..={}", tau(l))));
    }
    match mode {
        NumericMode::Exact => Ok(Value::Exact(
            q_exact(l)?.swap_remove((j - 1) as usize),
        )),
        NumericMode::Log { bits } => {
            let q = q_tracked(l, bits)?;
            Ok(Value::Tracked(q[(j - 1) as usize]))
        }
    }
}

/// Normalized log-weights `ln q(l, j)` for `j = 1..=τ`, computed with a
/// log-sum-exp normalization and never exponentiated; the large-`l` path.
pub fn log_q_tracked(l: i64, bits: u32) -> Result<Vec<TrackedReal>> {
    EvalPoint::new(l, 0)?;
    let t = tau(l);
    let mut logs = Vec::with_capacity(t as usize);
    for j in 1..=t {
        let c1 = kernel::log_binomial((2 * (l + j) - 1) as u64, l + j - 1, bits)?;
        let c2 = kernel::log_binomial((4 * l - 1 - 2 * (l + j)) as u64, l + j - 1, bits)?;
        let front = TrackedReal::from_ratio((j * (l - j)) as i128, ((l + j) * (l + j)) as i128)
            .ln()?;
        logs.push(front.add(&c1).add(&c2));
    }
    let peak = TrackedReal::exact(
        logs.iter()
            .map(|t| t.value())
            .fold(f64::NEG_INFINITY, f64::max),
    );
    let mut total = CompensatedSum::new();
    for lw in &logs {
        total.add_tracked(lw.sub(&peak).exp()?);
    }
    let ln_total = total.tracked().ln()?.add(&peak);
    logs.iter().map(|lw| Ok(lw.sub(&ln_total))).collect()
}

/// The weights themselves from the log pipeline (all of them are <= 1, so
/// exponentiation is safe even when the unnormalized weights are not).
pub fn q_tracked(l: i64, bits: u32) -> Result<Vec<TrackedReal>> {
    log_q_tracked(l, bits)?.iter().map(|lq| lq.exp()).collect()
}

/// `d(l, j) · q(l, j)` assembled entirely in log space:
/// `ln|d·q| = ln h + ln|exp(Δ) - 1| + ln q` with `Δ = log g - log h`, then
/// one exponentiation of the moderate total. Neither `d` (which can exceed
/// the f64 range) nor the unnormalized weight is ever materialized.
///
/// Returns the certified sign of the term (that of `Δ`) alongside the
/// tracked value; terms whose magnitude underflows f64 come back as a
/// zero value with a covering subnormal bound, their sign still certified.
/// When the sign itself cannot be certified the value is a zero-centered
/// interval wide enough to contain the true term.
pub fn dq_signed(l: i64, j: i64, bits: u32, log_qj: &TrackedReal) -> Result<(Sign, TrackedReal)> {
    let delta = log_gh_diff(l, j, bits)?;
    let sign = kernel::certify_sign(delta);
    // zero-centered cover: |d·q| <= sup(h) · (e^{sup|Δ|} - 1) · sup(q)
    let wide = || {
        let sup_ln = (log_qj.value() + log_qj.abs_error())
            + ((l + j) as f64 / (l - j) as f64).ln() * 1.5;
        let sup_mag = sup_ln.exp() * (delta.value().abs() + delta.abs_error()).exp_m1();
        TrackedReal::new(0.0, sup_mag * (1.0 + 1e-9))
    };
    if sign == Sign::Indeterminate {
        return Ok((sign, wide()));
    }
    let ln_mag = match log_abs_expm1(&delta, sign) {
        Ok(v) => v.add(&log_h(l, j, bits)?).add(log_qj),
        Err(_) => return Ok((sign, wide())),
    };
    let upper = ln_mag.value() + ln_mag.abs_error();
    if upper < -740.0 {
        // true magnitude is below the smallest subnormal: cover it there
        return Ok((sign, TrackedReal::new(0.0, 5e-324)));
    }
    match ln_mag.exp() {
        Ok(mag) => Ok((
            sign,
            if sign == Sign::Negative {
                mag.neg()
            } else {
                mag
            },
        )),
        Err(_) => Ok((sign, wide())),
    }
}

/// `ln|exp(Δ) - 1|` for a tracked `Δ` of certified sign, stable across the
/// whole range (large positive, tiny, large negative).
fn log_abs_expm1(delta: &TrackedReal, sign: Sign) -> Result<TrackedReal> {
    match sign {
        Sign::Positive if delta.value() > 0.5 => {
            // Δ + ln(1 - e^{-Δ})
            let tail = delta.neg().exp()?.neg().ln_1p()?;
            Ok(delta.add(&tail))
        }
        Sign::Positive => delta.exp_m1()?.ln(),
        Sign::Negative if delta.value() < -0.5 => {
            // ln(1 - e^{Δ})
            delta.exp()?.neg().ln_1p()
        }
        Sign::Negative => delta.exp_m1()?.neg().ln(),
        Sign::Indeterminate => Err(Error::domain("uncertified sign in log_abs_expm1")),
    }
}

/// The expectation of `d(J)` under `q`, split at the threshold index:
/// both conditional means, both tail probabilities, and the total.
#[derive(Debug, Clone)]
pub struct ExpectationSplit {
    pub l: i64,
    /// Split index (the threshold `⌊√l⌋/2` unless the caller overrides it).
    pub split: i64,
    /// `E[d(J)]`.
    pub expected: ExactRational,
    /// `E[d(J) | J > split]`.
    pub upper_mean: ExactRational,
    /// `E[-d(J) | J <= split]`.
    pub lower_mean: ExactRational,
    /// `P[J <= split]`.
    pub prob_low: ExactRational,
    /// `P[J > split]`.
    pub prob_high: ExactRational,
}

/// Exact expectation decomposition; requires `l >= 9` (smaller `l` are
/// covered by the reduced two-term check in the pairwise module).
pub fn expected_d_exact(l: i64) -> Result<ExpectationSplit> {
    expected_d_split(l, (kernel::isqrt(l as u64) / 2) as i64)
}

/// Exact expectation decomposition split at a caller-chosen index.
pub fn expected_d_split(l: i64, split: i64) -> Result<ExpectationSplit> {
    if l < 9 {
        return Err(Error::domain(format!(
            "expectation decomposition requires l >= 9, got {l}"
        )));
    }
    let t = tau(l);
    if split < 1 || split >= t {
        return Err(Error::index(format!(
            "split index {split} outside 1..{t}"
        )));
    }
    let w = weights_exact(l)?;
    let total: ExactRational = w.iter().sum();
    let mut low_mass = ExactRational::zero(); // Σ_{j<=split} w
    let mut low_dw = ExactRational::zero(); // Σ_{j<=split} d·w
    let mut high_dw = ExactRational::zero(); // Σ_{j>split} d·w
    for (idx, wj) in w.iter().enumerate() {
        let j = idx as i64 + 1;
        let dw = d_exact(EvalPoint::new(l, j)?) * wj;
        if j <= split {
            low_mass += wj;
            low_dw += dw;
        } else {
            high_dw += dw;
        }
    }
    let high_mass = &total - &low_mass;
    Ok(ExpectationSplit {
        l,
        split,
        expected: (&low_dw + &high_dw) / &total,
        upper_mean: &high_dw / &high_mass,
        lower_mean: -&low_dw / &low_mass,
        prob_low: low_mass / &total,
        prob_high: high_mass / total,
    })
}

/// `d(l, j)` as a tracked value: `h · (exp(log g - log h) - 1)`, so the
/// threshold-adjacent cancellation happens inside the tracked log difference.
pub fn d_tracked(l: i64, j: i64, bits: u32) -> Result<TrackedReal> {
    let diff = log_gh_diff(l, j, bits)?;
    let h = TrackedReal::from_ratio((l + j) as i128, (l - j) as i128);
    Ok(h.mul(&diff.exp_m1()?))
}

/// The expectation decomposition with tracked bounds; the large-`l`
/// counterpart of [`ExpectationSplit`].
#[derive(Debug, Clone)]
pub struct TrackedExpectationSplit {
    pub l: i64,
    pub split: i64,
    pub expected: TrackedReal,
    pub upper_mean: TrackedReal,
    pub lower_mean: TrackedReal,
    pub prob_low: TrackedReal,
    pub prob_high: TrackedReal,
}

/// Expectation decomposition in log mode: weights through the log-sum-exp
/// normalization, `d` through the tracked log difference, sums compensated.
pub fn expected_d_tracked(l: i64, split: i64, bits: u32) -> Result<TrackedExpectationSplit> {
    if l < 9 {
        return Err(Error::domain(format!(
            "expectation decomposition requires l >= 9, got {l}"
        )));
    }
    let t = tau(l);
    if split < 1 || split >= t {
        return Err(Error::index(format!("split index {split} outside 1..{t}")));
    }
    let log_q = log_q_tracked(l, bits)?;
    let mut low_mass = CompensatedSum::new();
    let mut high_mass = CompensatedSum::new();
    let mut low_dq = CompensatedSum::new();
    let mut high_dq = CompensatedSum::new();
    for j in 1..=t {
        let lqj = &log_q[(j - 1) as usize];
        let (_, dq) = dq_signed(l, j, bits, lqj)?;
        if j <= split {
            low_mass.add_tracked(lqj.exp()?);
            low_dq.add_tracked(dq);
        } else {
            high_mass.add_tracked(lqj.exp()?);
            high_dq.add_tracked(dq);
        }
    }
    let (low_mass, high_mass) = (low_mass.tracked(), high_mass.tracked());
    let (low_dq, high_dq) = (low_dq.tracked(), high_dq.tracked());
    Ok(TrackedExpectationSplit {
        l,
        split,
        expected: low_dq.add(&high_dq),
        upper_mean: high_dq.div(&high_mass)?,
        lower_mean: low_dq.neg().div(&low_mass)?,
        prob_low: low_mass,
        prob_high: high_mass,
    })
}

/// A number in either value domain.
#[derive(Debug, Clone)]
pub enum Value {
    Exact(ExactRational),
    Tracked(TrackedReal),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => kernel::ratio_to_f64(r),
            Value::Tracked(t) => t.value(),
        }
    }
}

/// `g` in the requested mode; log mode fails when the value overflows f64.
pub fn g(p: EvalPoint, mode: NumericMode) -> Result<Value> {
    match mode {
        NumericMode::Exact => Ok(Value::Exact(g_exact(p))),
        NumericMode::Log { bits } => Ok(Value::Tracked(log_g(p.l, p.j, bits)?.exp()?)),
    }
}

/// `h` in the requested mode.
pub fn h(p: EvalPoint, mode: NumericMode) -> Result<Value> {
    match mode {
        NumericMode::Exact => Ok(Value::Exact(h_exact(p))),
        NumericMode::Log { .. } => Ok(Value::Tracked(TrackedReal::from_ratio(
            (p.l + p.j) as i128,
            (p.l - p.j) as i128,
        ))),
    }
}

/// `d = g - h` in the requested mode. In log mode the value is computed as
/// `h·(exp(log g - log h) - 1)` so the cancellation near the threshold is
/// confined to the tracked log difference.
pub fn d(p: EvalPoint, mode: NumericMode) -> Result<Value> {
    match mode {
        NumericMode::Exact => Ok(Value::Exact(d_exact(p))),
        NumericMode::Log { bits } => Ok(Value::Tracked(d_tracked(p.l, p.j, bits)?)),
    }
}

/// `expected_d` in the requested mode, split at the threshold index.
pub fn expected_d(l: i64, mode: NumericMode) -> Result<ExpectationView> {
    let split = (kernel::isqrt(l.max(0) as u64) / 2) as i64;
    match mode {
        NumericMode::Exact => Ok(ExpectationView::Exact(expected_d_split(l, split)?)),
        NumericMode::Log { bits } => {
            Ok(ExpectationView::Tracked(expected_d_tracked(l, split, bits)?))
        }
    }
}

#[derive(Debug, Clone)]
pub enum ExpectationView {
    Exact(ExpectationSplit),
    Tracked(TrackedExpectationSplit),
}
