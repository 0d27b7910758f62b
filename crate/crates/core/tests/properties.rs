use proptest::prelude::*;

use ineq_core::analysis::{best_bound, sweep, SweepSpec, XGrid, TIE_TOLERANCE};
use ineq_core::bounds::formulas::general;
use ineq_core::bounds::{alt_holder_p_limit, bound_convex_direct, bound_power_mean, Exponents};
use ineq_core::identity::verify_identity;
use ineq_core::means::{
    generalized_log_mean_pow, proposition1_bound, proposition2_bound, MeanPair,
};
use ineq_core::quadrature::{check_convexity, integrate};
use ineq_core::{parse, BoundRequest, Evaluator, Family, Interval, RuleForm, Variant};

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Dyadic endpoints and rule points, so `a + b - x` is exact.
fn dyadic_point() -> impl Strategy<Value = (Interval, f64)> {
    (-3072i32..3072, 51i32..4096, 0i32..=1024).prop_map(|(i, j, k)| {
        let (a, len) = (f64::from(i) / 1024.0, f64::from(j) / 1024.0);
        let x = a + len * f64::from(k) / 1024.0;
        (Interval::new(a, a + len).unwrap(), x)
    })
}

fn interval() -> impl Strategy<Value = Interval> {
    (-3.0f64..3.0, 0.05f64..4.0).prop_map(|(a, len)| Interval::new(a, a + len).unwrap())
}

/// Every family/variant with a parameter valid for order `n`.
fn all_requests(n: usize, p: f64, q: f64) -> Vec<(Family, Variant, Exponents)> {
    let p_alt = 1.0 + (p - 1.0).min(alt_holder_p_limit(n) - 1.0) * 0.99;
    let mut out = vec![
        (Family::ConvexDirect, Variant::Corrected, Exponents::none()),
        (
            Family::PowerMean,
            Variant::Corrected,
            Exponents::power_mean(q),
        ),
    ];
    for v in [Variant::Corrected, Variant::PaperStated] {
        out.push((Family::Holder, v, Exponents::holder(p)));
        out.push((Family::AltHolder, v, Exponents::holder(p_alt)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_leaves_rhs_unchanged(
        n in 1usize..6, (iv, x) in dyadic_point(),
        ea in 0.0f64..10.0, eb in 0.0f64..10.0, p in 1.05f64..6.0, q in 1.0f64..5.0,
    ) {
        let mirrored = iv.a() + iv.b() - x;
        for (family, variant, ex) in all_requests(n, p, q) {
            let lhs = general(family, variant, n, &iv, x, ex, ea, eb);
            let rhs = general(family, variant, n, &iv, mirrored, ex, eb, ea);
            prop_assert!(rel(lhs, rhs) <= 1e-13, "{family:?} {variant:?}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn rhs_is_homogeneous(
        n in 1usize..6, iv in interval(), s in 0.0f64..=1.0,
        ea in 0.0f64..10.0, eb in 0.0f64..10.0, lambda in 0.01f64..100.0,
        p in 1.05f64..6.0, q in 1.0f64..5.0,
    ) {
        let x = iv.a() + s * iv.length();
        for (family, variant, ex) in all_requests(n, p, q) {
            let base = general(family, variant, n, &iv, x, ex, ea, eb);
            let scaled = general(family, variant, n, &iv, x, ex, lambda * ea, lambda * eb);
            prop_assert!(rel(scaled, lambda * base) <= 1e-13);
        }
    }

    #[test]
    fn rhs_is_monotone_in_endpoint_values(
        n in 1usize..6, iv in interval(), s in 0.0f64..=1.0,
        ea in 0.0f64..10.0, eb in 0.0f64..10.0, da in 0.0f64..5.0, db in 0.0f64..5.0,
        p in 1.05f64..6.0, q in 1.0f64..5.0,
    ) {
        let x = iv.a() + s * iv.length();
        for (family, variant, ex) in all_requests(n, p, q) {
            let base = general(family, variant, n, &iv, x, ex, ea, eb);
            let up_a = general(family, variant, n, &iv, x, ex, ea + da, eb);
            let up_b = general(family, variant, n, &iv, x, ex, ea, eb + db);
            prop_assert!(up_a >= base * (1.0 - 1e-14));
            prop_assert!(up_b >= base * (1.0 - 1e-14));
        }
    }

    #[test]
    fn power_mean_at_one_is_convex_direct(n in 1usize..5, s in 0.0f64..=1.0, c in 0.1f64..3.0) {
        let f = parse(&format!("exp({c}*t) + t^6")).unwrap();
        let iv = Interval::new(-0.5, 1.5).unwrap();
        let x = iv.a() + s * iv.length();
        let direct = bound_convex_direct(&f, n, &iv, x).unwrap();
        let pm = bound_power_mean(&f, n, &iv, x, 1.0).unwrap();
        prop_assert!(rel(direct, pm) <= 1e-13);
    }

    #[test]
    fn polynomial_identity_holds(
        coeffs in prop::collection::vec(-2.0f64..2.0, 1..7), n in 1usize..6,
        iv in interval(), s in 0.0f64..=1.0,
    ) {
        let text = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("({c})*t^{k}"))
            .collect::<Vec<_>>()
            .join(" + ");
        let f = parse(&text).unwrap();
        let x = iv.a() + s * iv.length();
        for form in [RuleForm::PointX(x), RuleForm::Midpoint, RuleForm::Trapezoid] {
            let r = verify_identity(&f, n, &iv, form, 1e-9).unwrap();
            prop_assert!(r.holds, "{text} n={n} {form:?}: {r:?}");
        }
    }

    #[test]
    fn quadrature_is_exact_on_polynomials(
        coeffs in prop::collection::vec(-5.0f64..5.0, 1..10), iv in interval(),
    ) {
        let poly = |t: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c);
        let anti = |t: f64| {
            coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + c / (k as f64 + 1.0))
                * t
        };
        let want = anti(iv.b()) - anti(iv.a());
        let got = integrate(poly, iv, 1e-12).unwrap();
        prop_assert!((got.value - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }

    #[test]
    fn convexity_verdict_is_scale_invariant(lambda in 1e-3f64..1e3, which in 0usize..4) {
        let iv = Interval::new(0.0, 3.0).unwrap();
        let g: fn(f64) -> f64 = [
            |t: f64| t.exp(),
            |t: f64| t.cos().abs(),
            |t: f64| (t - 1.0).powi(4),
            |t: f64| t.sin(),
        ][which];
        let base = check_convexity(g, iv).unwrap().convex;
        let scaled = check_convexity(|t| lambda * g(t), iv).unwrap().convex;
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn log_mean_power_lies_between_endpoint_powers(
        a in 0.1f64..5.0, len in 0.01f64..5.0, n in prop::sample::select(vec![-4, -3, -2, 1, 2, 3, 5]),
    ) {
        let pair = MeanPair::new(a, a + len).unwrap();
        let m = generalized_log_mean_pow(&pair, n).unwrap();
        let (lo, hi) = {
            let (u, v) = (a.powi(n), (a + len).powi(n));
            (u.min(v), u.max(v))
        };
        if n == 1 {
            prop_assert!(rel(m, a + 0.5 * len) <= 1e-13);
        }
        prop_assert!(m > lo && m < hi);
    }

    #[test]
    fn mean_inequalities_match_first_order_bounds(
        a in 0.1f64..3.0, len in 0.05f64..3.0, s in 0.0f64..=1.0,
        n in prop::sample::select(vec![-3, -2, 1, 2, 3, 4]), q in 1.0f64..4.0,
    ) {
        let pair = MeanPair::new(a, a + len).unwrap();
        let iv = pair.interval();
        let x = a + s * len;
        let f = parse(&format!("t^({n})")).unwrap();
        let p1 = proposition1_bound(&pair, n, x).unwrap();
        let direct = bound_convex_direct(&f, 1, &iv, x).unwrap();
        prop_assert!(rel(p1, direct / len) <= 1e-12);
        let p2 = proposition2_bound(&pair, n, x, q).unwrap();
        let pm = bound_power_mean(&f, 1, &iv, x, q).unwrap();
        prop_assert!(rel(p2, pm) <= 1e-12);
        let p2_one = proposition2_bound(&pair, n, x, 1.0).unwrap();
        prop_assert!(rel(p2_one, len * p1) <= 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweep_accounts_for_every_combination(
        n_max in 1usize..4, k in 1usize..6, p_values in prop::collection::vec(1.1f64..5.0, 1..4),
        both in any::<bool>(),
    ) {
        let variants = if both {
            vec![Variant::Corrected, Variant::PaperStated]
        } else {
            vec![Variant::Corrected]
        };
        let spec = SweepSpec {
            n_values: (1..=n_max).collect(),
            x_grid: XGrid::Count(k),
            trapezoid: true,
            q_values: vec![1.0, 2.0],
            p_values,
            variants,
            ..SweepSpec::new("exp", parse("exp(t)").unwrap(), Interval::new(0.0, 1.0).unwrap())
        };
        let out = sweep(&spec);
        prop_assert_eq!(out.records.len() + out.skips.len(), spec.combination_count());

        let best = best_bound(&out.records).unwrap();
        for b in &best {
            let w = b.winner.rhs.unwrap();
            for r in out.records.iter().filter(|r| {
                r.valid && r.variant == "corrected" && r.n == b.group.n && r.x == b.group.x
                    && r.form == b.group.form
            }) {
                prop_assert!(w <= r.rhs.unwrap() * (1.0 + TIE_TOLERANCE));
            }
        }
    }
}

#[test]
fn evaluation_is_homogeneous_in_the_function() {
    let iv = Interval::new(-1.0, 2.0).unwrap();
    let f = parse("exp(t)").unwrap();
    for lambda in [0.25, 3.0, 40.0] {
        let g = parse(&format!("{lambda}*exp(t)")).unwrap();
        let (ef, eg) = (Evaluator::new(&f, iv), Evaluator::new(&g, iv));
        for req in [
            BoundRequest::convex_direct(2, RuleForm::PointX(0.3)),
            BoundRequest::power_mean(3, RuleForm::Midpoint, 2.0),
            BoundRequest::holder(1, RuleForm::Trapezoid, 3.0, Variant::Corrected),
        ] {
            let (a, b) = (ef.evaluate(&req).unwrap(), eg.evaluate(&req).unwrap());
            assert!(rel(b.rhs, lambda * a.rhs) <= 1e-13);
            assert!(rel(b.lhs, lambda * a.lhs) <= 1e-9);
        }
    }
}

#[test]
fn reflected_function_gives_the_same_report() {
    let iv = Interval::new(0.0, 1.5).unwrap();
    let f = parse("exp(t) + t^4").unwrap();
    let g = parse("exp(1.5 - t) + (1.5 - t)^4").unwrap();
    let (ef, eg) = (Evaluator::new(&f, iv), Evaluator::new(&g, iv));
    for n in 1..=4 {
        for x in iv.grid(7) {
            let mirrored = RuleForm::PointX(iv.a() + iv.b() - x);
            for (req, flipped) in [
                (
                    BoundRequest::convex_direct(n, RuleForm::PointX(x)),
                    BoundRequest::convex_direct(n, mirrored),
                ),
                (
                    BoundRequest::power_mean(n, RuleForm::PointX(x), 1.5),
                    BoundRequest::power_mean(n, mirrored, 1.5),
                ),
                (
                    BoundRequest::holder(n, RuleForm::PointX(x), 2.0, Variant::Corrected),
                    BoundRequest::holder(n, mirrored, 2.0, Variant::Corrected),
                ),
            ] {
                let (a, b) = (ef.evaluate(&req).unwrap(), eg.evaluate(&flipped).unwrap());
                assert!(rel(a.rhs, b.rhs) <= 1e-12, "n={n} x={x}");
                assert!((a.lhs - b.lhs).abs() <= 1e-10, "n={n} x={x}");
            }
        }
    }
}
