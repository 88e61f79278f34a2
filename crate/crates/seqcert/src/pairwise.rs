//! The pairwise-inequality machinery: both sides of the re-expressed
//! inequality, the gap between them, the reference gap table, the
//! per-`l` certification that the paired terms dominate (which yields the
//! positive expectation), and the monotonicity scans over the gap grid.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::funcs::{self, EvalPoint, Value};
use crate::kernel::{
    self, binomial_exact, ratio_to_f64, NumericMode, Sign, TrackedReal,
};
use crate::report::{CheckItem, VerificationReport, Witness};
use crate::threshold;
use crate::{Error, ExactRational, Result};

fn validate_cell(a: i64, j: i64, l: i64) -> Result<()> {
    if j < 1 || j > a {
        return Err(Error::index(format!("j={j} outside 1..={a}")));
    }
    EvalPoint::new(l, j + a + 1).map(|_| ())
}

/// Left side of the re-expressed pairwise inequality:
/// `g(j+a+1)/h(j+a+1) - 1`.
pub fn pair_lhs(a: i64, j: i64, l: i64, mode: NumericMode) -> Result<Value> {
    validate_cell(a, j, l)?;
    let m = j + a + 1;
    match mode {
        NumericMode::Exact => Ok(Value::Exact(pair_lhs_exact(a, j, l))),
        NumericMode::Log { bits } => {
            Ok(Value::Tracked(funcs::log_gh_diff(l, m, bits)?.exp_m1()?))
        }
    }
}

fn pair_lhs_exact(a: i64, j: i64, l: i64) -> ExactRational {
    let m = j + a + 1;
    let g = funcs::g_exact(EvalPoint::new(l, m).expect("validated"));
    g * ExactRational::new(BigInt::from(l - m), BigInt::from(l + m)) - ExactRational::one()
}

/// Right side of the re-expressed pairwise inequality:
/// `{1 - g(j)/h(j)} · {j(j+l+a+1)/((j+l)(j+a+1))}` times the ratio of
/// binomial products.
pub fn pair_rhs(a: i64, j: i64, l: i64, mode: NumericMode) -> Result<Value> {
    validate_cell(a, j, l)?;
    match mode {
        NumericMode::Exact => Ok(Value::Exact(pair_rhs_exact(a, j, l))),
        NumericMode::Log { bits } => Ok(Value::Tracked(pair_rhs_tracked(a, j, l, bits)?)),
    }
}

fn pair_rhs_exact(a: i64, j: i64, l: i64) -> ExactRational {
    let front = ExactRational::one()
        - funcs::g_exact(EvalPoint::new(l, j).expect("validated"))
            * ExactRational::new(BigInt::from(l - j), BigInt::from(l + j));
    let mid = ExactRational::new(
        BigInt::from(j * (j + l + a + 1)),
        BigInt::from((j + l) * (j + a + 1)),
    );
    let bins = ExactRational::new(
        binomial_exact((2 * l - 1 + 2 * j) as u64, l - 1 + j)
            * binomial_exact((2 * l - 1 - 2 * j) as u64, l - 1 + j),
        binomial_exact((2 * l + 1 + 2 * a + 2 * j) as u64, l + a + j)
            * binomial_exact((2 * l - 3 - 2 * a - 2 * j) as u64, l + a + j),
    );
    front * mid * bins
}

fn pair_rhs_tracked(a: i64, j: i64, l: i64, bits: u32) -> Result<TrackedReal> {
    let front = funcs::log_gh_diff(l, j, bits)?.exp_m1()?.neg();
    let mid = TrackedReal::from_ratio(
        (j * (j + l + a + 1)) as i128,
        ((j + l) * (j + a + 1)) as i128,
    );
    let lc = |n: i64, k: i64| kernel::log_binomial(n as u64, k, bits);
    let ln_bins = lc(2 * l - 1 + 2 * j, l - 1 + j)?
        .add(&lc(2 * l - 1 - 2 * j, l - 1 + j)?)
        .sub(&lc(2 * l + 1 + 2 * a + 2 * j, l + a + j)?)
        .sub(&lc(2 * l - 3 - 2 * a - 2 * j, l + a + j)?);
    Ok(front.mul(&mid).mul(&ln_bins.exp()?))
}

/// The gap (left minus right side) at `(a, j, l)`.
pub fn gap(a: i64, j: i64, l: i64, mode: NumericMode) -> Result<Value> {
    validate_cell(a, j, l)?;
    match mode {
        NumericMode::Exact => Ok(Value::Exact(gap_exact(a, j, l))),
        NumericMode::Log { bits } => Ok(Value::Tracked(gap_tracked(a, j, l, bits)?)),
    }
}

pub(crate) fn gap_exact(a: i64, j: i64, l: i64) -> ExactRational {
    pair_lhs_exact(a, j, l) - pair_rhs_exact(a, j, l)
}

fn gap_tracked(a: i64, j: i64, l: i64, bits: u32) -> Result<TrackedReal> {
    if bits > 53 {
        return kernel::mp::gap(a, j, l, bits);
    }
    let lhs = funcs::log_gh_diff(l, j + a + 1, bits)?.exp_m1()?;
    Ok(lhs.sub(&pair_rhs_tracked(a, j, l, bits)?))
}

/// One formatted entry of the gap table.
#[derive(Debug, Clone, Serialize)]
pub struct GapEntry {
    pub a: i64,
    pub j: i64,
    pub l: i64,
    pub value: f64,
    /// Fixed six decimals, round-half-even, computed from the exact rational.
    pub formatted: String,
    /// True when round-half-even and round-half-away disagree at six
    /// decimals (an exact tie), where another rounding convention would differ.
    pub rounding_tie: bool,
}

/// Lower-triangular table of gaps `Δ(a, j, 4(a+1)²-1)` for `1 <= j <= a`.
#[derive(Debug, Clone, Serialize)]
pub struct GapTable {
    pub max_a: i64,
    /// `rows[a-1][j-1]` holds the entry for `(a, j)`.
    pub rows: Vec<Vec<GapEntry>>,
}

/// Builds the gap table at the per-row stringent `l = 4(a+1)² - 1`.
/// Entries are computed exactly and rounded once at the end; the mode
/// argument only relaxes this for exploratory runs.
pub fn gap_table(max_a: i64, mode: NumericMode) -> Result<GapTable> {
    if max_a < 1 {
        return Err(Error::domain(format!("max_a must be >= 1, got {max_a}")));
    }
    let rows = (1..=max_a)
        .into_par_iter()
        .map(|a| {
            let l = 4 * (a + 1) * (a + 1) - 1;
            (1..=a)
                .map(|j| {
                    let (value, formatted, rounding_tie) = match mode {
                        NumericMode::Exact => {
                            let exact = gap_exact(a, j, l);
                            let (s, tie) = format_6dp(&exact);
                            (ratio_to_f64(&exact), s, tie)
                        }
                        NumericMode::Log { bits } => {
                            let t = gap_tracked(a, j, l, bits)?;
                            (t.value(), format!("{:.6}", t.value()), false)
                        }
                    };
                    Ok(GapEntry {
                        a,
                        j,
                        l,
                        value,
                        formatted,
                        rounding_tie,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapTable { max_a, rows })
}

/// Renders an exact rational with six decimals, ties to even, and flags
/// whether the tie actually occurred.
pub fn format_6dp(v: &ExactRational) -> (String, bool) {
    let scaled = v * BigInt::from(1_000_000);
    let (mut q, r) = scaled.numer().div_mod_floor(scaled.denom());
    // fractional part r/denom decides the rounding of q (floor so r >= 0)
    let twice = &r * BigInt::from(2);
    let mut tie = false;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => q += 1,
        std::cmp::Ordering::Less => {}
        std::cmp::Ordering::Equal => {
            tie = true;
            if q.is_odd() {
                q += 1; // half-even; half-away would always bump
            }
        }
    }
    let negative = q.is_negative();
    let q = q.abs();
    let int = &q / BigInt::from(1_000_000);
    let frac = &q % BigInt::from(1_000_000);
    let s = format!(
        "{}{}.{:06}",
        if negative { "-" } else { "" },
        int,
        frac.to_u64().unwrap()
    );
    (s, tie)
}

/// Certifies the pairwise inequalities at one `l`: the precondition
/// `2a+1 <= τ`, each paired-term domination, the positivity of the skipped
/// block, and the resulting tail domination / positive expectation.
pub fn verify_pairwise(l: i64, mode: NumericMode) -> Result<VerificationReport> {
    if l < 9 {
        return Err(Error::domain(format!(
            "pairwise verification requires l >= 9, got {l} (smaller l use the reduced check)"
        )));
    }
    let mut report = VerificationReport::new("pairwise-suite", mode);
    let t = funcs::tau(l);
    let a = match threshold::compute_a(l, mode)? {
        Some(a) => a,
        None => {
            report.push(CheckItem::fail(
                "threshold-exists",
                vec![Witness::new(
                    &[("l", l.to_string())],
                    "no negative value of d found",
                )],
            ));
            return Ok(report);
        }
    };
    report.push(CheckItem::of(
        "precondition-2a+1<=tau",
        2 * a < t,
        vec![Witness::new(
            &[("l", l.to_string()), ("a", a.to_string())],
            format!("2a+1 = {} exceeds τ = {t}", 2 * a + 1),
        )],
    ));

    match mode {
        NumericMode::Exact => pairwise_items_exact(l, a, t, &mut report)?,
        NumericMode::Log { bits } => pairwise_items_tracked(l, a, t, bits, &mut report)?,
    }
    Ok(report)
}

fn pairwise_items_exact(l: i64, a: i64, t: i64, report: &mut VerificationReport) -> Result<()> {
    let w = funcs::weights_exact(l)?;
    let dws: Vec<ExactRational> = (1..=t)
        .map(|j| EvalPoint::new(l, j).map(|p| funcs::d_exact(p) * &w[(j - 1) as usize]))
        .collect::<Result<_>>()?;

    // paired domination: d(a+1+j)·w(a+1+j) > -d(j)·w(j) for j = 1..=a
    let mut bad = Vec::new();
    for j in 1..=a {
        if !(&dws[(a + j) as usize] + &dws[(j - 1) as usize]).is_positive() {
            bad.push(pair_witness(l, a, j));
        }
    }
    report.push(CheckItem::of("pairwise-inequalities", bad.is_empty(), bad));

    // the block above the threshold is strictly positive
    let mut bad = Vec::new();
    for j in (a + 1)..=t {
        if !w[(j - 1) as usize].is_positive() || !dws[(j - 1) as usize].is_positive() {
            bad.push(Witness::new(
                &[("l", l.to_string()), ("j", j.to_string())],
                "d·q not positive above the threshold",
            ));
        }
    }
    report.push(CheckItem::of("upper-block-positive", bad.is_empty(), bad));

    // chain conclusion: Σ_{j>a} d·w > -Σ_{j<=a} d·w, hence E[d(J)] > 0
    let head: ExactRational = dws[..a as usize].iter().sum();
    let tail: ExactRational = dws[a as usize..].iter().sum();
    report.push(CheckItem::of(
        "tail-dominates",
        tail > -&head,
        vec![Witness::new(&[("l", l.to_string())], "tail sum does not dominate")],
    ));
    report.push(CheckItem::of(
        "expectation-positive",
        (head + tail).is_positive(),
        vec![Witness::new(&[("l", l.to_string())], "E[d(J)] <= 0")],
    ));
    Ok(())
}

/// Log-mode items: everything runs on tracked values; any sign the bounds
/// cannot settle is recomputed exactly for that point alone. (The composite
/// weighted sums have no multi-precision rung — exact arithmetic is the
/// stronger fallback and is always available.)
fn pairwise_items_tracked(
    l: i64,
    a: i64,
    t: i64,
    bits: u32,
    report: &mut VerificationReport,
) -> Result<()> {
    let log_q = funcs::log_q_tracked(l, bits)?;
    let dq: Vec<(Sign, TrackedReal)> = (1..=t)
        .map(|j| funcs::dq_signed(l, j, bits, &log_q[(j - 1) as usize]))
        .collect::<Result<_>>()?;

    let exact_fallback = ExactFallback::new(l);
    let mut bad = Vec::new();
    for j in 1..=a {
        let tracked = dq[(a + j) as usize].1.add(&dq[(j - 1) as usize].1);
        let ok = match kernel::certify_sign(tracked) {
            Sign::Positive => true,
            Sign::Negative => false,
            Sign::Indeterminate => exact_fallback.pair_holds(a, j)?,
        };
        if !ok {
            bad.push(pair_witness(l, a, j));
        }
    }
    report.push(CheckItem::of("pairwise-inequalities", bad.is_empty(), bad));

    let mut bad = Vec::new();
    for j in (a + 1)..=t {
        // the weight is positive by construction, so the sign of d·q is the
        // certified sign of d
        let ok = match dq[(j - 1) as usize].0 {
            Sign::Positive => true,
            Sign::Negative => false,
            Sign::Indeterminate => exact_fallback.dq_positive(j)?,
        };
        if !ok {
            bad.push(Witness::new(
                &[("l", l.to_string()), ("j", j.to_string())],
                "d·q not positive above the threshold",
            ));
        }
    }
    report.push(CheckItem::of("upper-block-positive", bad.is_empty(), bad));

    let mut head = kernel::CompensatedSum::new();
    for (_, v) in &dq[..a as usize] {
        head.add_tracked(*v);
    }
    let mut tail = kernel::CompensatedSum::new();
    for (_, v) in &dq[a as usize..] {
        tail.add_tracked(*v);
    }
    let expected = head.tracked().add(&tail.tracked());
    let positive = match kernel::certify_sign(expected) {
        Sign::Positive => true,
        Sign::Negative => false,
        Sign::Indeterminate => exact_fallback.expectation_positive(a)?,
    };
    report.push(CheckItem::of(
        "tail-dominates",
        positive,
        vec![Witness::new(&[("l", l.to_string())], "tail sum does not dominate")],
    ));
    report.push(CheckItem::of(
        "expectation-positive",
        positive,
        vec![Witness::new(&[("l", l.to_string())], "E[d(J)] <= 0")],
    ));
    Ok(())
}

fn pair_witness(l: i64, a: i64, j: i64) -> Witness {
    Witness::new(
        &[
            ("l", l.to_string()),
            ("a", a.to_string()),
            ("j", j.to_string()),
        ],
        "paired term does not dominate",
    )
}

/// Lazily materialized exact weights for the per-point fallbacks.
struct ExactFallback {
    l: i64,
    weights: std::cell::OnceCell<Vec<ExactRational>>,
}

impl ExactFallback {
    fn new(l: i64) -> Self {
        ExactFallback {
            l,
            weights: std::cell::OnceCell::new(),
        }
    }

    fn weights(&self) -> Result<&[ExactRational]> {
        if self.weights.get().is_none() {
            let w = funcs::weights_exact(self.l)?;
            let _ = self.weights.set(w);
        }
        Ok(self.weights.get().unwrap())
    }

    fn dw(&self, j: i64) -> Result<ExactRational> {
        let w = self.weights()?;
        Ok(funcs::d_exact(EvalPoint::new(self.l, j)?) * &w[(j - 1) as usize])
    }

    fn pair_holds(&self, a: i64, j: i64) -> Result<bool> {
        Ok((self.dw(a + 1 + j)? + self.dw(j)?).is_positive())
    }

    fn dq_positive(&self, j: i64) -> Result<bool> {
        Ok(self.dw(j)?.is_positive())
    }

    fn expectation_positive(&self, a: i64) -> Result<bool> {
        let _ = a;
        let t = funcs::tau(self.l);
        let mut sum = ExactRational::zero();
        for j in 1..=t {
            sum += self.dw(j)?;
        }
        Ok(sum.is_positive())
    }
}

/// The reduced check for `l = 6, 7, 8` (where `τ = 2`):
/// `d(2)·q(2) > -d(1)·q(1)`, exactly.
pub fn verify_small_l(l: i64) -> Result<VerificationReport> {
    if !(6..=8).contains(&l) {
        return Err(Error::domain(format!(
            "the reduced check applies to l in 6..=8, got {l}"
        )));
    }
    let mut report = VerificationReport::new("reduced-small-l", NumericMode::Exact);
    let w = funcs::weights_exact(l)?;
    let d1 = funcs::d_exact(EvalPoint::new(l, 1)?);
    let d2 = funcs::d_exact(EvalPoint::new(l, 2)?);
    let ok = d2 * &w[1] + d1 * &w[0] > ExactRational::zero();
    report.push(CheckItem::of(
        "paired-domination",
        ok,
        vec![Witness::new(
            &[("l", l.to_string())],
            "d(2)q(2) <= -d(1)q(1)",
        )],
    ));
    Ok(report)
}

/// Grid scan of the three conjectured monotonicities of the gap:
/// (i) decreasing in `l` across each threshold window, (ii) increasing in
/// `j` along each stringent row, (iii) decreasing in `a` down the stringent
/// column. Reported as evidence on the scanned grid, not as a proof.
///
/// Gap comparisons are exact rational comparisons at every grid size the
/// front end accepts; the requested mode is recorded in the report.
pub fn monotonicity_scan(max_a: i64, mode: NumericMode) -> Result<VerificationReport> {
    if max_a < 1 {
        return Err(Error::domain(format!("max_a must be >= 1, got {max_a}")));
    }
    let mut report = VerificationReport::new("gap-monotonicity-scan", mode);

    // (i) decreasing in l over the window where the threshold equals a
    let cells: Vec<(i64, i64)> = (1..=max_a)
        .flat_map(|a| (1..=a).map(move |j| (a, j)))
        .collect();
    let violations: Vec<Vec<Witness>> = cells
        .par_iter()
        .map(|&(a, j)| {
            let mut bad = Vec::new();
            let mut prev: Option<(i64, ExactRational)> = None;
            for l in (4 * a * a).max(6)..=(4 * (a + 1) * (a + 1) - 1) {
                if j + a + 1 > funcs::tau(l) {
                    continue;
                }
                let cur = gap_exact(a, j, l);
                if let Some((pl, pv)) = prev {
                    if cur >= pv {
                        bad.push(Witness::new(
                            &[
                                ("a", a.to_string()),
                                ("j", j.to_string()),
                                ("l", format!("{pl}->{l}")),
                            ],
                            "gap does not decrease in l",
                        ));
                    }
                }
                prev = Some((l, cur));
            }
            bad
        })
        .collect();
    let bad: Vec<Witness> = violations.into_iter().flatten().collect();
    report.push(CheckItem::of("gap-decreasing-in-l", bad.is_empty(), bad));

    // (ii) increasing in j along the stringent row l = 4(a+1)²-1
    let mut bad = Vec::new();
    for a in 1..=max_a {
        let l = 4 * (a + 1) * (a + 1) - 1;
        let mut prev: Option<ExactRational> = None;
        for j in 1..=a {
            let cur = gap_exact(a, j, l);
            if let Some(pv) = prev {
                if cur <= pv {
                    bad.push(Witness::new(
                        &[("a", a.to_string()), ("j", j.to_string())],
                        "gap does not increase in j",
                    ));
                }
            }
            prev = Some(cur);
        }
    }
    report.push(CheckItem::of("gap-increasing-in-j", bad.is_empty(), bad));

    // (iii) the stringent cell decreases in a
    let mut bad = Vec::new();
    let mut prev: Option<ExactRational> = None;
    for a in 1..=max_a {
        let cur = gap_exact(a, 1, 4 * (a + 1) * (a + 1) - 1);
        if let Some(pv) = prev {
            if cur >= pv {
                bad.push(Witness::new(
                    &[("a", a.to_string())],
                    "stringent gap does not decrease in a",
                ));
            }
        }
        prev = Some(cur);
    }
    report.push(CheckItem::of(
        "stringent-gap-decreasing-in-a",
        bad.is_empty(),
        bad,
    ));
    Ok(report)
}

/// Identifier of an emitted figure dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FigureId {
    /// Paired terms `d·q` on both sides, l = 256.
    PairedTerms,
    /// Left and right sides of the re-expressed inequality, l = 256.
    PairSides,
    /// Both sides swept over l = 36..=63 at a = 3, j = 1.
    SweepJ1,
    /// Same sweep at j = 2.
    SweepJ2,
    /// Same sweep at j = 3.
    SweepJ3,
    /// Stringent gap against its two-term approximation, a = 1..=10.
    GapVsApprox,
}

impl FigureId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "4.1" => Ok(FigureId::PairedTerms),
            "4.2" => Ok(FigureId::PairSides),
            "4.3" => Ok(FigureId::SweepJ1),
            "4.4" => Ok(FigureId::SweepJ2),
            "4.5" => Ok(FigureId::SweepJ3),
            "4.6" => Ok(FigureId::GapVsApprox),
            other => Err(Error::domain(format!("unknown figure id: {other}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FigureId::PairedTerms => "4.1",
            FigureId::PairSides => "4.2",
            FigureId::SweepJ1 => "4.3",
            FigureId::SweepJ2 => "4.4",
            FigureId::SweepJ3 => "4.5",
            FigureId::GapVsApprox => "4.6",
        }
    }
}

/// A tabular dataset underlying one figure.
#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub id: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Emits the data table behind the requested figure.
pub fn figure_data(id: FigureId) -> Result<FigureData> {
    let cols = |names: &[&str]| names.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match id {
        FigureId::PairedTerms => {
            let (l, a) = (256, 8);
            let q = funcs::q_exact(l)?;
            let rows = (1..=a)
                .map(|j| {
                    let upper = funcs::d_exact(EvalPoint::new(l, j + a + 1)?)
                        * &q[(j + a) as usize];
                    let lower = -(funcs::d_exact(EvalPoint::new(l, j)?) * &q[(j - 1) as usize]);
                    Ok(vec![j as f64, ratio_to_f64(&upper), ratio_to_f64(&lower)])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FigureData {
                id: id.label().into(),
                columns: cols(&["j", "upper_dq", "neg_lower_dq"]),
                rows,
            })
        }
        FigureId::PairSides => {
            let (l, a) = (256, 8);
            let rows = (1..=a)
                .map(|j| {
                    Ok(vec![
                        j as f64,
                        ratio_to_f64(&pair_lhs_exact(a, j, l)),
                        ratio_to_f64(&pair_rhs_exact(a, j, l)),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FigureData {
                id: id.label().into(),
                columns: cols(&["j", "lhs", "rhs"]),
                rows,
            })
        }
        FigureId::SweepJ1 | FigureId::SweepJ2 | FigureId::SweepJ3 => {
            let a = 3;
            let j = match id {
                FigureId::SweepJ1 => 1,
                FigureId::SweepJ2 => 2,
                _ => 3,
            };
            let rows = (36..=63)
                .map(|l| {
                    Ok(vec![
                        l as f64,
                        ratio_to_f64(&pair_lhs_exact(a, j, l)),
                        ratio_to_f64(&pair_rhs_exact(a, j, l)),
                    ])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FigureData {
                id: id.label().into(),
                columns: cols(&["l", "lhs", "rhs"]),
                rows,
            })
        }
        FigureId::GapVsApprox => {
            let rows = (1..=10)
                .map(|a| {
                    let l = 4 * (a + 1) * (a + 1) - 1;
                    let gap = ratio_to_f64(&gap_exact(a, 1, l));
                    let ap = (a + 1) as f64;
                    let approx = 1.0 / (ap * ap)
                        + (19.0 / 12.0 - std::f64::consts::E / 2.0) / (ap * ap * ap);
                    Ok(vec![a as f64, gap, approx])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FigureData {
                id: id.label().into(),
                columns: cols(&["a", "gap", "approximation"]),
                rows,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXACT: NumericMode = NumericMode::Exact;

    #[test]
    fn cell_validation() {
        assert!(validate_cell(2, 2, 16).is_ok()); // 2a+1 = 5 = τ(16), the tight case
        assert!(validate_cell(2, 3, 16).is_err());
        assert!(validate_cell(2, 2, 14).is_err()); // j+a+1 = 5 > τ(14) = 4
    }

    #[test]
    fn reference_gap_values() {
        for (a, j, l, expect) in [
            (1i64, 1i64, 15i64, 0.440909f64),
            (10, 1, 483, 0.008467),
            (10, 10, 483, 0.195960),
            (5, 3, 143, 0.088660),
        ] {
            let v = match gap(a, j, l, EXACT).unwrap() {
                Value::Exact(r) => ratio_to_f64(&r),
                _ => unreachable!(),
            };
            assert!(
                (v - expect).abs() < 5e-7,
                "gap({a},{j},{l}) = {v}, expected {expect}"
            );
        }
    }

    #[test]
    fn tracked_gap_agrees_with_exact() {
        for (a, j, l) in [(1i64, 1i64, 15i64), (3, 2, 63), (8, 4, 256)] {
            let exact = ratio_to_f64(&gap_exact(a, j, l));
            let t = gap_tracked(a, j, l, 53).unwrap();
            assert!(
                (t.value() - exact).abs() <= t.abs_error() + 1e-12,
                "({a},{j},{l}): {} vs {exact} ± {}",
                t.value(),
                t.abs_error()
            );
        }
    }

    #[test]
    fn six_decimal_formatting_is_half_even() {
        let r = |n: i64, d: i64| ExactRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(format_6dp(&r(1, 2)).0, "0.500000");
        // exact tie cases: 0.0000005 -> 0.000000 (even), 0.0000015 -> 0.000002
        let (s, tie) = format_6dp(&r(1, 2_000_000));
        assert_eq!((s.as_str(), tie), ("0.000000", true));
        let (s, tie) = format_6dp(&r(3, 2_000_000));
        assert_eq!((s.as_str(), tie), ("0.000002", true));
        let (s, tie) = format_6dp(&r(-3, 2_000_000));
        assert_eq!((s.as_str(), tie), ("-0.000002", true));
        assert_eq!(format_6dp(&r(440909, 1_000_000)).0, "0.440909");
    }

    #[test]
    fn pairwise_suite_small_cases() {
        for l in [9i64, 16, 17, 100] {
            let r = verify_pairwise(l, EXACT).unwrap();
            assert!(r.passed(), "l={l}: {:?}", r.failures().collect::<Vec<_>>());
        }
        assert!(verify_pairwise(8, EXACT).is_err());
    }

    #[test]
    fn pairwise_suite_log_mode() {
        for l in [9i64, 17, 64] {
            let r = verify_pairwise(l, NumericMode::log(53).unwrap()).unwrap();
            assert!(r.passed(), "l={l}");
        }
    }

    #[test]
    fn reduced_check_for_smallest_l() {
        for l in 6..=8 {
            assert!(verify_small_l(l).unwrap().passed(), "l={l}");
        }
        assert!(verify_small_l(9).is_err());
    }

    #[test]
    fn equivalence_with_direct_pairing() {
        // sign(gap) > 0 iff d(j+a+1)q(j+a+1) > -d(j)q(j), exactly
        for l in [9i64, 16, 36, 100] {
            let a = threshold::compute_a(l, EXACT).unwrap().unwrap();
            let w = funcs::weights_exact(l).unwrap();
            for j in 1..=a {
                let gap_positive = gap_exact(a, j, l).is_positive();
                let dw_hi = funcs::d_exact(EvalPoint::new(l, j + a + 1).unwrap())
                    * &w[(j + a) as usize];
                let dw_lo = funcs::d_exact(EvalPoint::new(l, j).unwrap()) * &w[(j - 1) as usize];
                let pair_holds = dw_hi > -dw_lo;
                assert_eq!(gap_positive, pair_holds, "l={l} j={j}");
            }
        }
    }

    #[test]
    fn scan_monotonicities_small_grid() {
        let r = monotonicity_scan(4, EXACT).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn figure_tables_have_expected_shape() {
        let f = figure_data(FigureId::PairedTerms).unwrap();
        assert_eq!(f.rows.len(), 8);
        // the paired upper terms dominate visually: every red above blue
        for row in &f.rows {
            assert!(row[1] > row[2]);
        }
        let f = figure_data(FigureId::SweepJ1).unwrap();
        assert_eq!(f.rows.len(), 28);
        let f = figure_data(FigureId::GapVsApprox).unwrap();
        assert_eq!(f.rows.len(), 10);
        assert!((f.rows[9][1] - 0.008467).abs() < 5e-7);
        let expected_approx = 1.0 / 121.0 + (19.0 / 12.0 - std::f64::consts::E / 2.0) / 1331.0;
        assert!((f.rows[9][2] - expected_approx).abs() < 1e-12);
        assert!(FigureId::parse("4.7").is_err());
    }
}
