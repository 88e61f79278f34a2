//! Randomized invariants.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

use seqcert::funcs::{self, EvalPoint};
use seqcert::kernel::{self, binomial_exact, certify_sign, NumericMode, Sign};
use seqcert::ExactRational;

fn arb_rational() -> impl Strategy<Value = ExactRational> {
    (-1_000_000i64..1_000_000, 1i64..1000)
        .prop_map(|(n, d)| ExactRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_arithmetic_is_associative_and_commutative(
        a in arb_rational(),
        b in arb_rational(),
        c in arb_rational(),
    ) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
    }

    #[test]
    fn difference_operator_identity(values in prop::collection::vec(arb_rational(), 5..20)) {
        // Δ³f(j) = Δ{Δ²f(j)} = Δ²{Δf(j)} on arbitrary sequences
        let n = values.len();
        let delta: Vec<ExactRational> =
            (0..n - 1).map(|j| &values[j + 1] - &values[j]).collect();
        for j in 1..n - 2 {
            let d3 = (&values[j + 2] - &values[j + 1] * BigInt::from(2) + &values[j])
                - (&values[j + 1] - &values[j] * BigInt::from(2) + &values[j - 1]);
            let d_of_d2 = (&values[j + 2] - &values[j + 1] * BigInt::from(3)
                + &values[j] * BigInt::from(3))
                - &values[j - 1];
            let d2_of_d = &delta[j + 1] - &delta[j] * BigInt::from(2) + &delta[j - 1];
            prop_assert_eq!(&d3, &d_of_d2);
            prop_assert_eq!(&d3, &d2_of_d);
        }
    }

    #[test]
    fn certified_signs_never_contradict_exact_mode(l in 6i64..400, j_seed in 0i64..1000) {
        let tau = funcs::tau(l);
        let j = 1 + j_seed % tau;
        let log_sign = funcs::d_sign(l, j, NumericMode::Log { bits: 53 }).unwrap();
        let exact_sign = funcs::d_sign(l, j, NumericMode::Exact).unwrap();
        // the ladder may stay indeterminate, but must never flip a sign
        if log_sign != Sign::Indeterminate && exact_sign != Sign::Indeterminate {
            prop_assert_eq!(log_sign, exact_sign, "l={} j={}", l, j);
        }
    }

    #[test]
    fn log_binomial_brackets_the_exact_coefficient(n in 1u64..2000, k_seed in 0u64..2000) {
        let k = (k_seed % (n + 1)) as i64;
        let t = kernel::log_binomial(n, k, 53).unwrap();
        let exact = binomial_exact(n, k);
        // compare in log space against the bigint (shift down to f64 range)
        let bits = exact.bits();
        let reference = if bits <= 60 {
            exact.to_f64().unwrap().ln()
        } else {
            let top: BigInt = &exact >> (bits - 60);
            top.to_f64().unwrap().ln() + (bits - 60) as f64 * std::f64::consts::LN_2
        };
        prop_assert!(
            (t.value() - reference).abs() <= t.abs_error() + 1e-9,
            "C({}, {}) log {} ± {} vs {}",
            n, k, t.value(), t.abs_error(), reference
        );
    }

    #[test]
    fn tracked_arithmetic_brackets_exact_rational_arithmetic(
        a in arb_rational(),
        b in arb_rational(),
    ) {
        let ta = tracked_of(&a);
        let tb = tracked_of(&b);
        let sum = ta.add(&tb);
        prop_assert!(sum.contains(kernel::ratio_to_f64(&(&a + &b))));
        let prod = ta.mul(&tb);
        prop_assert!(prod.contains(kernel::ratio_to_f64(&(&a * &b))));
        if !b.is_zero() {
            let quot = ta.div(&tb).unwrap();
            prop_assert!(quot.contains(kernel::ratio_to_f64(&(&a / &b))));
        }
    }

    #[test]
    fn product_of_positive_increasing_convex_sequences_is_convex(
        start in 1i64..50,
        d0 in (1i64..40, 1i64..9),
        curvatures in prop::collection::vec((1i64..30, 1i64..9), 3..10),
        d0_t in (1i64..40, 1i64..9),
        curvatures_t in prop::collection::vec((1i64..30, 1i64..9), 3..10),
    ) {
        // build two random positive, strictly increasing, strictly convex
        // sequences from positive second differences, then check the product rule
        let build = |start: i64, d0: (i64, i64), curv: &[(i64, i64)]| {
            let mut seq = vec![ExactRational::new(BigInt::from(start), BigInt::from(1))];
            let mut step = ExactRational::new(BigInt::from(d0.0), BigInt::from(d0.1));
            for (n, d) in curv {
                let next = seq.last().unwrap() + &step;
                seq.push(next);
                step += ExactRational::new(BigInt::from(*n), BigInt::from(*d));
            }
            seq.push(seq.last().unwrap() + &step);
            seq
        };
        let n = curvatures.len().min(curvatures_t.len());
        let s = build(start, d0, &curvatures[..n]);
        let t = build(start, d0_t, &curvatures_t[..n]);
        let report = seqcert::diff::product_convexity_check(&s, &t);
        prop_assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn building_block_is_positive_and_convex_on_its_domain(
        a_parts in (0i64..99, 100i64..200),
        b_parts in (1i64..500, 1i64..10),
        offsets in prop::collection::vec(1u16..999, 5..24),
    ) {
        // f_{a,b} with random rational a in [0,1), b > 0, on a random
        // increasing grid inside (0, b/(1-a)): chord-convex and positive
        let a = ExactRational::new(BigInt::from(a_parts.0), BigInt::from(a_parts.1));
        let b = ExactRational::new(BigInt::from(b_parts.0), BigInt::from(b_parts.1));
        let limit = &b / (ExactRational::new(BigInt::from(1), BigInt::from(1)) - &a);
        let mut ticks: Vec<u16> = offsets.clone();
        ticks.sort_unstable();
        ticks.dedup();
        prop_assume!(ticks.len() >= 3);
        let grid: Vec<ExactRational> = ticks
            .iter()
            .map(|&k| &limit * ExactRational::new(BigInt::from(k as i64), BigInt::from(1000)))
            .collect();
        let report = seqcert::diff::real_fn_convexity_check(&a, &b, &grid).unwrap();
        prop_assert!(report.passed(), "{report:?}");
        for x in &grid {
            let f = funcs::f_ab(&a, &b, x).unwrap();
            prop_assert!(f.is_positive());
        }
    }

    #[test]
    fn tau_and_point_validity(l in 6i64..5000) {
        let tau = funcs::tau(l);
        prop_assert!(tau >= 2);
        prop_assert!(EvalPoint::new(l, tau).is_ok());
        prop_assert!(EvalPoint::new(l, tau + 1).is_err());
        // h has no pole on the valid range: τ < l
        prop_assert!(tau < l);
    }
}

use num_traits::Zero;

fn tracked_of(r: &ExactRational) -> kernel::TrackedReal {
    let v = kernel::ratio_to_f64(r);
    kernel::TrackedReal::new(v, v.abs() * 1e-15 + 1e-300)
}

#[test]
fn certify_sign_boundary_behaviour() {
    use kernel::TrackedReal;
    assert_eq!(certify_sign(TrackedReal::new(1e-300, 1e-300)), Sign::Indeterminate);
    assert_eq!(certify_sign(TrackedReal::new(2e-300, 1e-300)), Sign::Positive);
    assert_eq!(certify_sign(TrackedReal::exact(0.0)), Sign::Indeterminate);
}
