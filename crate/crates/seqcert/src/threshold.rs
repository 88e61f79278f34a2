//! The sign-change threshold of `d`: computing `max{j : d(l, j) < 0}`,
//! verifying the closed formula `⌊√l / 2⌋` with the economical boundary
//! scheme, interval monotonicity of the `g/h` ratio, and the asymptotic
//! expansion residuals at the square boundaries.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::funcs::{self, EvalPoint};
use crate::kernel::{isqrt, NumericMode, Sign, TrackedReal};
use crate::report::{CheckItem, VerificationReport, Witness};
use crate::{Error, ExactRational, Result};

/// The closed-form threshold `⌊√l / 2⌋`, via integer square root so the
/// value flips exactly at the perfect squares `l = 4a²`.
pub fn conjectured_a(l: i64) -> Result<i64> {
    EvalPoint::new(l, 0)?;
    Ok((isqrt(l as u64) / 2) as i64)
}

/// Signs of `d(l, j)` for every `j = 1..=τ`, plus the derived summary.
#[derive(Debug, Clone)]
pub struct ThresholdScan {
    pub l: i64,
    pub signs: Vec<Sign>,
    /// Largest `j` with a certified `d(l, j) < 0`, if any.
    pub last_negative: Option<i64>,
    /// True when the sign pattern is `- ... - + ... +` with no second change.
    pub single_change: bool,
    pub indeterminate: bool,
}

/// Scans the sign of `d(l, j)` across `j = 1..=τ`.
///
/// The exact path carries `g` as an unreduced integer fraction, advanced by
/// the one-step ratio, so each sign is a single big-integer comparison.
pub fn scan(l: i64, mode: NumericMode) -> Result<ThresholdScan> {
    EvalPoint::new(l, 0)?;
    let t = funcs::tau(l);
    let signs = match mode {
        NumericMode::Exact => {
            let mut num = BigInt::one();
            let mut den = BigInt::one();
            let mut signs = Vec::with_capacity(t as usize);
            for j in 1..=t {
                let (a, b) = funcs::g_ratio_parts(l, j - 1)?;
                num *= BigInt::from(a);
                den *= BigInt::from(b);
                let lhs = &num * (l - j);
                let rhs = &den * (l + j);
                signs.push(match lhs.cmp(&rhs) {
                    std::cmp::Ordering::Greater => Sign::Positive,
                    std::cmp::Ordering::Less => Sign::Negative,
                    std::cmp::Ordering::Equal => Sign::Indeterminate,
                });
            }
            signs
        }
        NumericMode::Log { .. } => (1..=t)
            .map(|j| funcs::d_sign(l, j, mode))
            .collect::<Result<_>>()?,
    };

    let last_negative = signs
        .iter()
        .rposition(|&s| s == Sign::Negative)
        .map(|idx| idx as i64 + 1);
    let mut changes = 0u32;
    for w in signs.windows(2) {
        if w[0] == Sign::Negative && w[1] == Sign::Positive {
            changes += 1;
        } else if w[0] == Sign::Positive && w[1] == Sign::Negative {
            changes = u32::MAX; // a positive-to-negative flip is disqualifying
            break;
        }
    }
    let indeterminate = signs.contains(&Sign::Indeterminate);
    let single_change = !indeterminate
        && changes == 1
        && signs.first() == Some(&Sign::Negative)
        && signs.last() == Some(&Sign::Positive);
    Ok(ThresholdScan {
        l,
        signs,
        last_negative,
        single_change,
        indeterminate,
    })
}

/// Largest `j` in `1..=τ` with a certified `d(l, j) < 0`; `None` when no
/// index is negative (a verification failure for the callers, not a crash).
pub fn compute_a(l: i64, mode: NumericMode) -> Result<Option<i64>> {
    Ok(scan(l, mode)?.last_negative)
}

/// Outcome of the formula check at a single `l`.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdResult {
    pub l: i64,
    pub a_computed: Option<i64>,
    pub a_formula: i64,
    pub matches: bool,
    /// Signs of `d` at `j = a_formula` and `j = a_formula + 1`.
    pub boundary_signs: (Sign, Sign),
}

pub fn check_threshold(l: i64, mode: NumericMode) -> Result<ThresholdResult> {
    let a_formula = conjectured_a(l)?;
    let s = scan(l, mode)?;
    let sign_at = |j: i64| -> Sign {
        if j >= 1 && j <= s.signs.len() as i64 {
            s.signs[(j - 1) as usize]
        } else {
            Sign::Indeterminate
        }
    };
    Ok(ThresholdResult {
        l,
        a_computed: s.last_negative,
        a_formula,
        matches: s.last_negative == Some(a_formula) && s.single_change,
        boundary_signs: (sign_at(a_formula), sign_at(a_formula + 1)),
    })
}

/// Verifies `compute_a(l) = ⌊√l / 2⌋` for every `l` in the range, that the
/// sign pattern of `d` has exactly one change, and runs the economical
/// boundary scheme: for each square `l = 4a²` inside the range,
/// `d(4a², a) < 0`, `d(4a², a+1) > 0` and `d(4a²-1, a) > 0`.
pub fn verify_threshold(l_min: i64, l_max: i64, mode: NumericMode) -> Result<VerificationReport> {
    if l_min < 6 || l_min > l_max {
        return Err(Error::domain(format!("bad range {l_min}..{l_max}")));
    }
    let mut report = VerificationReport::new("threshold-formula", mode);
    let scans: Vec<ThresholdScan> = (l_min..=l_max)
        .into_par_iter()
        .map(|l| scan(l, mode))
        .collect::<Result<_>>()?;

    let mut mismatch = Vec::new();
    let mut multi = Vec::new();
    let mut unresolved = Vec::new();
    for s in &scans {
        let formula = conjectured_a(s.l)?;
        if s.indeterminate {
            unresolved.push(Witness::new(
                &[("l", s.l.to_string())],
                "sign not certified at this precision",
            ));
            continue;
        }
        if s.last_negative != Some(formula) {
            mismatch.push(Witness::new(
                &[
                    ("l", s.l.to_string()),
                    (
                        "computed",
                        s.last_negative.map_or("none".into(), |a| a.to_string()),
                    ),
                    ("formula", formula.to_string()),
                ],
                "last negative index disagrees with ⌊√l/2⌋",
            ));
        }
        if !s.single_change {
            multi.push(Witness::new(
                &[("l", s.l.to_string())],
                "sign pattern is not a single negative-to-positive change",
            ));
        }
    }
    if unresolved.is_empty() {
        report.push(CheckItem::of("formula-matches", mismatch.is_empty(), mismatch));
        report.push(CheckItem::of("single-sign-change", multi.is_empty(), multi));
    } else {
        report.push(CheckItem::indeterminate("formula-matches", unresolved));
    }

    // boundary triples for every square inside the range
    let mut bad = Vec::new();
    let mut a = 2.max((isqrt(l_min.max(6) as u64) / 2) as i64);
    while 4 * a * a <= l_max {
        let sq = 4 * a * a;
        if sq >= l_min.max(6) && sq > 6 {
            let triple = [
                (sq, a, Sign::Negative),
                (sq, a + 1, Sign::Positive),
                (sq - 1, a, Sign::Positive),
            ];
            for (l, j, expect) in triple {
                if l < l_min || l > l_max {
                    continue;
                }
                let got = funcs::d_sign(l, j, mode)?;
                if got != expect {
                    bad.push(Witness::new(
                        &[("l", l.to_string()), ("j", j.to_string())],
                        format!("expected {expect:?}, got {got:?}"),
                    ));
                }
            }
        }
        a += 1;
    }
    report.push(CheckItem::of("boundary-triples", bad.is_empty(), bad));
    Ok(report)
}

/// Which of the two boundary indices the interval monotonicity check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RatioIndex {
    /// `j = a` (the threshold index itself).
    AtThreshold,
    /// `j = a + 1`.
    AboveThreshold,
}

/// Checks that `g(l, j)/h(l, j)` decreases strictly in `l` over the interval
/// `4a² <= l <= 4(a+1)² - 1` for `a >= 3`; for `a = 1, 2` the observed
/// non-monotone stretches are reported instead of asserted against.
pub fn ratio_monotone_in_l(a: i64, which: RatioIndex) -> Result<VerificationReport> {
    if a < 1 {
        return Err(Error::domain(format!("a must be >= 1, got {a}")));
    }
    let j = match which {
        RatioIndex::AtThreshold => a,
        RatioIndex::AboveThreshold => a + 1,
    };
    let mut values: Vec<(i64, ExactRational)> = Vec::new();
    for l in (4 * a * a).max(6)..=(4 * (a + 1) * (a + 1) - 1) {
        if j > funcs::tau(l) {
            continue;
        }
        let p = EvalPoint::new(l, j)?;
        let ratio = funcs::g_exact(p) * ExactRational::new(BigInt::from(l - j), BigInt::from(l + j));
        values.push((l, ratio));
    }
    let mut report = VerificationReport::new("ratio-monotone-in-l", NumericMode::Exact);
    let rising: Vec<(i64, i64)> = rising_runs(&values);
    if a >= 3 {
        let witnesses = rising
            .iter()
            .map(|&(from, to)| {
                Witness::new(
                    &[
                        ("a", a.to_string()),
                        ("j", j.to_string()),
                        ("l", format!("{from}..{to}")),
                    ],
                    "ratio does not decrease strictly",
                )
            })
            .collect::<Vec<_>>();
        report.push(CheckItem::of(
            "strictly-decreasing",
            witnesses.is_empty(),
            witnesses,
        ));
    } else {
        // conjectured exceptions: report what the scan saw, assert nothing
        let witnesses = rising
            .iter()
            .map(|&(from, to)| {
                Witness::new(
                    &[("a", a.to_string()), ("j", j.to_string())],
                    format!("ratio increases over l={from}..{to}"),
                )
            })
            .collect::<Vec<_>>();
        let mut item = CheckItem::pass("monotonicity-observation");
        item.witnesses = witnesses;
        report.push(item);
    }
    Ok(report)
}

/// Maximal runs `(l_start, l_end)` over which consecutive values do not
/// decrease.
fn rising_runs(values: &[(i64, ExactRational)]) -> Vec<(i64, i64)> {
    let mut runs = Vec::new();
    let mut start: Option<i64> = None;
    for w in values.windows(2) {
        let ((l0, v0), (_l1, v1)) = (&w[0], &w[1]);
        if v1 >= v0 {
            start.get_or_insert(*l0);
        } else if let Some(s) = start.take() {
            runs.push((s, *l0));
        }
    }
    if let Some(s) = start {
        runs.push((s, values.last().unwrap().0));
    }
    runs
}

/// Which expansion the residual tracks. Points sit at the square boundary
/// `l = 4a²` (or one below it), evaluated at `j = a` or `j = a + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ResidualKind {
    GAtSquare,
    HAtSquare,
    GAtSquareNext,
    HAtSquareNext,
    GBelowSquare,
    HBelowSquare,
}

/// One scaled residual, its exact limit constant, and the convergence flag
/// under the calibrated tolerance policy.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesResidual {
    pub a: i64,
    /// Scaling level: 1 for the leading correction, 2 for the next one.
    pub level: u8,
    pub scaled: f64,
    pub target: f64,
    pub target_name: String,
    pub converged: bool,
}

/// Tolerance bands `|scaled - target| <= C / a^p`, calibrated against a
/// 256-bit evaluation at a = 800 (observed deviations sit well under half
/// of each band; the constants keep a 4x margin).
fn band(kind: ResidualKind, level: u8) -> (f64, i32) {
    match (kind, level) {
        (ResidualKind::GAtSquare, _) => (4.0, 2),
        (ResidualKind::HAtSquare, _) => (1.0, 2),
        (ResidualKind::GAtSquareNext, 1) => (8.0, 1),
        (ResidualKind::GAtSquareNext, _) => (4.0, 1),
        (ResidualKind::HAtSquareNext, 1) => (1.0, 1),
        (ResidualKind::HAtSquareNext, _) => (0.5, 1),
        (ResidualKind::GBelowSquare, _) => (4.0, 2),
        (ResidualKind::HBelowSquare, _) => (1.0, 2),
    }
}

/// Scaled residuals of the boundary expansions. For each `a` the residual
/// removes the known leading terms of `log g` or `log h` at the boundary
/// point and rescales so the next coefficient appears as the limit:
/// `a³(log g(4a², a) - 1/(2a)) -> -3/32`, and so on per [`ResidualKind`].
pub fn expansion_residuals(kind: ResidualKind, a_values: &[i64]) -> Result<Vec<SeriesResidual>> {
    if a_values.iter().any(|&a| a < 3) {
        return Err(Error::domain("expansion residuals need a >= 3"));
    }
    let mut out = Vec::new();
    for &a in a_values {
        let af = a as f64;
        let push = |out: &mut Vec<SeriesResidual>,
                    level: u8,
                    scaled: f64,
                    target: f64,
                    name: &str| {
            let (c, p) = band(kind, level);
            out.push(SeriesResidual {
                a,
                level,
                scaled,
                target,
                target_name: name.to_string(),
                converged: (scaled - target).abs() <= c / af.powi(p),
            });
        };
        let half_alpha = TrackedReal::from_ratio(1, 2 * a as i128);
        match kind {
            ResidualKind::GAtSquare => {
                // The limit is -1/32: the expansion of log g at (4a², a) is
                // α/2 - α³/8 + 3α³/32 + O(α⁵) = α/2 - α³/32 + O(α⁵), which the
                // next-level coefficient 47/32 at j = a+1 corroborates
                // (3/2 - 1/32 = 47/32), as does 60-digit evaluation.
                let lg = funcs::log_g(4 * a * a, a, 53)?;
                let r = lg.sub(&half_alpha).scale(af * af * af);
                push(&mut out, 1, r.value(), -1.0 / 32.0, "-1/32");
            }
            ResidualKind::HAtSquare => {
                let lh = funcs::log_h(4 * a * a, a, 53)?;
                let r = lh.sub(&half_alpha).scale(af * af * af);
                push(&mut out, 1, r.value(), 1.0 / 96.0, "1/96");
            }
            ResidualKind::GAtSquareNext => {
                let lg = funcs::log_g(4 * a * a, a + 1, 53)?;
                let lead = lg.sub(&half_alpha);
                push(
                    &mut out,
                    1,
                    lead.scale(af * af).value(),
                    1.5,
                    "3/2",
                );
                let second = lead.sub(&TrackedReal::from_ratio(3, 2 * (a * a) as i128));
                push(
                    &mut out,
                    2,
                    second.scale(af * af * af).value(),
                    47.0 / 32.0,
                    "47/32",
                );
            }
            ResidualKind::HAtSquareNext => {
                let lh = funcs::log_h(4 * a * a, a + 1, 53)?;
                let lead = lh.sub(&half_alpha);
                push(&mut out, 1, lead.scale(af * af).value(), 0.5, "1/2");
                let second = lead.sub(&TrackedReal::from_ratio(1, 2 * (a * a) as i128));
                push(
                    &mut out,
                    2,
                    second.scale(af * af * af).value(),
                    1.0 / 96.0,
                    "1/96",
                );
            }
            ResidualKind::GBelowSquare => {
                let lg = funcs::log_g(4 * a * a - 1, a, 53)?;
                let r = lg.sub(&half_alpha).scale(af * af * af);
                push(&mut out, 1, r.value(), 7.0 / 32.0, "7/32");
            }
            ResidualKind::HBelowSquare => {
                let lh = funcs::log_h(4 * a * a - 1, a, 53)?;
                let r = lh.sub(&half_alpha).scale(af * af * af);
                push(&mut out, 1, r.value(), 13.0 / 96.0, "13/96");
            }
        }
    }
    Ok(out)
}
