//! Multi-precision evaluation rungs for the sign-certification ladder.
//!
//! The routines here recompute the cancellation-prone quantities (the
//! `log g - log h` difference and full pairwise gaps) entirely in
//! multi-precision floating point before rounding the result to an f64
//! carried by a [`TrackedReal`]. Magnitudes for the error bounds are
//! estimated in f64 alongside the computation; the claimed bound keeps a
//! margin of more than 2^40 over the worst-case accumulated ulp error, so
//! it is conservative for any realistic term count.

use astro_float::{BigFloat, Consts, RoundingMode};

use super::tracked::TrackedReal;
use crate::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;
/// Guard bits carried beyond the requested precision.
const GUARD: usize = 64;

pub struct MpCtx {
    bits: u32,
    prec: usize,
    cc: Consts,
    /// Running estimate of Σ (1 + |term| + |partial|), used for the bound.
    mass: f64,
}

impl MpCtx {
    pub fn new(bits: u32) -> Self {
        MpCtx {
            bits,
            prec: bits as usize + GUARD,
            cc: Consts::new().expect("constants cache"),
            mass: 1.0,
        }
    }

    fn bf(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.prec)
    }

    /// `ln(p/q)` for exact integer operands.
    fn ln_ratio(&mut self, p: u64, q: u64) -> BigFloat {
        let v = self.bf(p).div(&self.bf(q), self.prec, RM);
        let l = v.ln(self.prec, RM, &mut self.cc);
        self.mass += 2.0 + (p as f64 / q as f64).ln().abs();
        l
    }

    fn add(&mut self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        let r = a.add(b, self.prec, RM);
        self.mass += 1.0 + est(&r).abs();
        r
    }

    fn to_tracked(&self, x: &BigFloat) -> TrackedReal {
        let v = est(x);
        if v.is_nan() {
            return TrackedReal::new(f64::NAN, f64::INFINITY);
        }
        // accumulated mp error, then the final f64 rounding
        let mp_err = self.mass * 2f64.powi(-(self.bits as i32) - 20);
        let bound = (mp_err + v.abs() * 2.3e-16 + 1e-290) * (1.0 + 1e-12);
        TrackedReal::new(v, bound)
    }
}

/// Nearest-f64 estimate of a BigFloat via its decimal rendering.
fn est(x: &BigFloat) -> f64 {
    format!("{x}").parse::<f64>().unwrap_or(f64::NAN)
}

/// `log g - log h` at `(l, j)` computed without leaving multi-precision,
/// so the catastrophic cancellation near the sign-change index is resolved
/// by precision rather than luck.
pub fn log_gh_diff(l: i64, j: i64, bits: u32) -> TrackedReal {
    let mut ctx = MpCtx::new(bits);
    let diff = log_gh_bigfloat(&mut ctx, l, j);
    ctx.to_tracked(&diff)
}

/// `log g` at the multi-precision rung.
pub fn log_g(l: i64, j: i64, bits: u32) -> TrackedReal {
    assert!(l < 1 << 31, "multi-precision factor squares need l < 2^31");
    let mut ctx = MpCtx::new(bits);
    let mut acc = BigFloat::from_u64(0, ctx.prec);
    for i in 0..2 * j {
        let x = (l + j - i) as u64;
        let t = ctx.ln_ratio(x * x, x * x - 4 * (j as u64) * (j as u64));
        acc = ctx.add(&acc, &t);
    }
    ctx.to_tracked(&acc)
}

/// `ln C(n, k)` at the requested precision via the exact product
/// `Π (n-k+i)/i`. Falls over for very large `k` rather than degrade.
pub fn log_binomial(n: u64, k: u64, bits: u32) -> Result<TrackedReal> {
    let k = k.min(n - k);
    if k > (1 << 22) {
        return Err(Error::Overflow(format!(
            "multi-precision binomial path limited to k <= 2^22, got k={k}"
        )));
    }
    let mut ctx = MpCtx::new(bits);
    let mut acc = BigFloat::from_u64(0, ctx.prec);
    for i in 1..=k {
        let t = ctx.ln_ratio(n - k + i, i);
        acc = ctx.add(&acc, &t);
    }
    Ok(ctx.to_tracked(&acc))
}

/// The full pairwise gap (left side minus right side of the re-expressed
/// inequality) in multi-precision. `m = j + a + 1` is the partner index.
pub fn gap(a: i64, j: i64, l: i64, bits: u32) -> Result<TrackedReal> {
    let mut ctx = MpCtx::new(bits);
    let prec = ctx.prec;
    let m = j + a + 1;

    // lhs = exp(log g(m) - log h(m)) - 1
    let ghm = log_gh_bigfloat(&mut ctx, l, m);
    let one = BigFloat::from_u64(1, prec);
    let lhs = ghm.exp(prec, RM, &mut ctx.cc).sub(&one, prec, RM);
    ctx.mass += 4.0 + est(&lhs).abs();

    // rhs = (1 - exp(log g(j) - log h(j))) * small-ratio * binomial ratio
    let ghj = log_gh_bigfloat(&mut ctx, l, j);
    let front = one.sub(&ghj.exp(prec, RM, &mut ctx.cc), prec, RM);
    ctx.mass += 4.0;
    let num = (j * (j + l + a + 1)) as u64;
    let den = ((j + l) * (j + a + 1)) as u64;
    let small = BigFloat::from_u64(num, prec).div(&BigFloat::from_u64(den, prec), prec, RM);

    let lb = |ctx: &mut MpCtx, n: i64, k: i64| -> Result<BigFloat> {
        let (n, k) = (n as u64, k as u64);
        if k > n {
            return Err(Error::domain("binomial k > n in gap"));
        }
        let k = k.min(n - k);
        let mut acc = BigFloat::from_u64(0, ctx.prec);
        for i in 1..=k {
            let t = ctx.ln_ratio(n - k + i, i);
            acc = ctx.add(&acc, &t);
        }
        Ok(acc)
    };
    let c1 = lb(&mut ctx, 2 * l - 1 + 2 * j, l - 1 + j)?;
    let c2 = lb(&mut ctx, 2 * l - 1 - 2 * j, l - 1 + j)?;
    let c3 = lb(&mut ctx, 2 * l + 1 + 2 * a + 2 * j, l + a + j)?;
    let c4 = lb(&mut ctx, 2 * l - 3 - 2 * a - 2 * j, l + a + j)?;
    let ln_ratio = c1.add(&c2, prec, RM).sub(&c3, prec, RM).sub(&c4, prec, RM);
    ctx.mass += 3.0 + est(&ln_ratio).abs();
    let ratio = ln_ratio.exp(prec, RM, &mut ctx.cc);
    ctx.mass += 2.0 + est(&ratio).abs();

    let rhs = front.mul(&small, prec, RM).mul(&ratio, prec, RM);
    let gap = lhs.sub(&rhs, prec, RM);
    ctx.mass += 4.0 + est(&rhs).abs() + est(&gap).abs();
    Ok(ctx.to_tracked(&gap))
}

fn log_gh_bigfloat(ctx: &mut MpCtx, l: i64, j: i64) -> BigFloat {
    assert!(l < 1 << 31, "multi-precision factor squares need l < 2^31");
    let mut acc = BigFloat::from_u64(0, ctx.prec);
    for i in 0..2 * j {
        let x = (l + j - i) as u64;
        let t = ctx.ln_ratio(x * x, x * x - 4 * (j as u64) * (j as u64));
        acc = ctx.add(&acc, &t);
    }
    let h = ctx.ln_ratio((l + j) as u64, (l - j) as u64);
    let r = acc.sub(&h, ctx.prec, RM);
    ctx.mass += 1.0 + est(&r).abs();
    r
}
