//! Compensated summation with an accumulated error bound.

use super::tracked::TrackedReal;

/// Unit roundoff of f64.
const U: f64 = f64::EPSILON / 2.0;

/// Neumaier (improved Kahan) summation that also accumulates the absolute
/// mass of the summands and the per-term evaluation errors, so the final
/// result can be returned as a [`TrackedReal`] with a rigorous bound.
///
/// The compensation bound used is `8u * Σ|x_i|`, far above the Neumaier
/// worst case `(2u + O(n u^2)) Σ|x_i|` for any realistic term count.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs_mass: f64,
    term_err: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term whose own evaluation error is bounded by `err`.
    #[inline]
    pub fn add(&mut self, x: f64, err: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs_mass += x.abs();
        self.term_err += err;
    }

    #[inline]
    pub fn add_tracked(&mut self, x: TrackedReal) {
        self.add(x.value(), x.abs_error());
    }

    /// Merges another compensated sum (used for deterministic chunked
    /// reductions: chunks are combined in a fixed order).
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum, 0.0);
        self.add(other.comp, 0.0);
        self.abs_mass += other.abs_mass;
        self.term_err += other.term_err;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn bound(&self) -> f64 {
        (self.term_err + 8.0 * U * self.abs_mass) * (1.0 + 1e-12) + 1e-290
    }

    pub fn tracked(&self) -> TrackedReal {
        TrackedReal::new(self.value(), self.bound())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_the_naive_sum_loses() {
        let mut s = CompensatedSum::new();
        s.add(1.0, 0.0);
        for _ in 0..10_000 {
            s.add(1e-17, 0.0);
        }
        s.add(-1.0, 0.0);
        let t = s.tracked();
        assert!((t.value() - 1e-13).abs() <= t.abs_error());
        assert!(t.abs_error() < 1e-14);
    }

    #[test]
    fn bound_covers_true_error_on_ill_conditioned_input() {
        let mut s = CompensatedSum::new();
        let terms: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 - 5.0).collect();
        for &t in &terms {
            s.add(t, 0.0);
        }
        // high-accuracy reference: integers scaled exactly by 0.1 at the end
        let exact: i64 = (0..1000).map(|i| ((i * 37) % 101) as i64 - 50).sum();
        let reference = exact as f64 * 0.1;
        assert!((s.value() - reference).abs() <= s.bound() + 1e-12);
    }

    #[test]
    fn merge_matches_sequential_order() {
        let xs: Vec<f64> = (1..=1000).map(|i| 1.0 / i as f64).collect();
        let mut whole = CompensatedSum::new();
        for &x in &xs {
            whole.add(x, 0.0);
        }
        let mut merged = CompensatedSum::new();
        for chunk in xs.chunks(64) {
            let mut c = CompensatedSum::new();
            for &x in chunk {
                c.add(x, 0.0);
            }
            merged.merge(&c);
        }
        assert!((whole.value() - merged.value()).abs() <= whole.bound() + merged.bound());
    }
}
