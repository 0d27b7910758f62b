//! Exit criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use ineq_core::analysis::{default_specs, sweep_all, write_csv};
use ineq_core::bounds::formulas::{corollary, general};
use ineq_core::bounds::{
    alt_holder_p_limit, bound_holder, corollary_closed_form, Corollary, Exponents, NUMERIC_TOL,
};
use ineq_core::corpus::{find, positive_entries};
use ineq_core::identity::verify_identity;
use ineq_core::means::{
    generalized_log_mean_pow, proposition1_bound, proposition2_bound, MeanPair,
};
use ineq_core::{parse, BoundRequest, Evaluator, Family, Interval, RuleForm, Variant};

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn identity_suite() -> Outcome {
    let start = Instant::now();
    let (mut cases, mut worst, mut failures) = (0usize, 0.0f64, Vec::new());
    for e in positive_entries() {
        let f = e.function().unwrap();
        let iv = e.interval;
        let mut forms: Vec<RuleForm> = iv.grid(9).into_iter().map(RuleForm::PointX).collect();
        forms.extend([RuleForm::Midpoint, RuleForm::Trapezoid]);
        for n in 1..=5 {
            for &form in &forms {
                cases += 1;
                match verify_identity(&f, n, &iv, form, 1e-9) {
                    Ok(r) => {
                        worst = worst.max(r.residual);
                        if r.residual > 1e-9 {
                            failures.push(format!("{} n={n} {form:?}: {}", e.name, r.residual));
                        }
                    }
                    Err(err) => failures.push(format!("{} n={n} {form:?}: {err}", e.name)),
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures.is_empty() && elapsed < Duration::from_secs(30),
        detail: format!(
            "{cases} cases, max residual {worst:.3e} (<= 1e-9), {:.2}s (< 30s){}",
            elapsed.as_secs_f64(),
            failures
                .first()
                .map(|s| format!(", first failure {s}"))
                .unwrap_or_default()
        ),
    }
}

fn equality_witnesses() -> Outcome {
    let f = parse("t^2").unwrap();
    let iv = Interval::new(0.0, 1.0).unwrap();
    let ev = Evaluator::new(&f, iv);
    let mut worst = 0.0f64;
    let mut check = |req: BoundRequest, want: f64| {
        let r = ev.evaluate(&req).unwrap();
        worst = worst.max((r.lhs - want).abs()).max((r.rhs - want).abs());
    };
    check(
        BoundRequest::convex_direct(2, RuleForm::Midpoint),
        1.0 / 12.0,
    );
    for q in [1.0, 1.25, 1.5, 2.0, 3.0, 7.5] {
        check(
            BoundRequest::power_mean(2, RuleForm::Midpoint, q),
            1.0 / 12.0,
        );
    }
    check(
        BoundRequest::convex_direct(2, RuleForm::Trapezoid),
        1.0 / 3.0,
    );
    let printed = corollary_closed_form(
        &f,
        &BoundRequest::convex_direct(2, RuleForm::Trapezoid),
        &iv,
        Corollary::Trapezoid,
    )
    .unwrap();
    worst = worst.max((printed - 1.0 / 3.0).abs());
    Outcome {
        pass: worst <= 1e-12,
        detail: format!("max |value - witness| {worst:.3e} (<= 1e-12)"),
    }
}

fn validity_suite() -> Outcome {
    // same grid as the default sweep
    let out = sweep_all(&default_specs());
    let mut gated = 0usize;
    let mut violations = Vec::new();
    let mut errors = 0usize;
    for r in &out.records {
        if r.error.is_some() {
            errors += 1;
            continue;
        }
        if r.convex != Some(true) {
            continue;
        }
        gated += 1;
        let (lhs, rhs, err) = (r.lhs.unwrap(), r.rhs.unwrap(), r.lhs_err.unwrap());
        if rhs < lhs - (err + NUMERIC_TOL) {
            violations.push(format!(
                "{} n={} x={:?} {} p={:?} q={:?}: lhs {lhs} rhs {rhs}",
                r.function, r.n, r.x, r.family, r.p, r.q
            ));
        }
    }
    let families: std::collections::BTreeSet<_> = out.records.iter().map(|r| r.family).collect();
    Outcome {
        pass: violations.is_empty() && errors == 0 && families.len() == 5,
        detail: format!(
            "{gated} gated records over {} families, {} skipped, {} violations, {errors} errors{}",
            families.len(),
            out.skips.len(),
            violations.len(),
            violations
                .first()
                .map(|s| format!(", first {s}"))
                .unwrap_or_default()
        ),
    }
}

fn algebraic_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let tol = 1e-13;
    let mut worst = [0.0f64; 3];
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6usize);
        let a = rng.gen_range(-3.0..3.0);
        let iv = Interval::new(a, a + rng.gen_range(0.1..5.0)).unwrap();
        let x = rng.gen_range(iv.a()..=iv.b());
        let (ea, eb) = (rng.gen_range(0.01..10.0), rng.gen_range(0.01..10.0));
        let q = rng.gen_range(1.0..5.0);
        let none = Exponents::none();
        let pm = Exponents::power_mean(q);
        let c = Variant::Corrected;

        let direct = general(Family::ConvexDirect, c, n, &iv, x, none, ea, eb);
        let pm1 = general(
            Family::PowerMean,
            c,
            n,
            &iv,
            x,
            Exponents::power_mean(1.0),
            ea,
            eb,
        );
        worst[0] = worst[0].max(rel(direct, pm1));

        for (family, ex) in [(Family::ConvexDirect, none), (Family::PowerMean, pm)] {
            let cor = |w| corollary(family, c, n, &iv, w, ex, ea, eb);
            let avg = 0.5 * (cor(Corollary::Left) + cor(Corollary::Right));
            worst[1] = worst[1].max(rel(cor(Corollary::Trapezoid), avg));
        }

        let p_alt = rng.gen_range(1.05..alt_holder_p_limit(n) - 0.01);
        let p = rng.gen_range(1.05..6.0);
        for (family, ex) in [
            (Family::ConvexDirect, none),
            (Family::PowerMean, pm),
            (Family::Holder, Exponents::holder(p)),
            (Family::AltHolder, Exponents::holder(p_alt)),
        ] {
            for (at, which) in [
                (iv.a(), Corollary::Left),
                (iv.midpoint(), Corollary::Midpoint),
                (iv.b(), Corollary::Right),
            ] {
                let g = general(family, c, n, &iv, at, ex, ea, eb);
                let k = corollary(family, c, n, &iv, which, ex, ea, eb);
                worst[2] = worst[2].max(rel(g, k));
            }
        }
    }
    Outcome {
        pass: worst.iter().all(|&w| w <= tol),
        detail: format!(
            "1000 inputs: q=1 reduction {:.2e}, trapezoid averaging {:.2e}, specialization {:.2e} (each <= 1e-13 rel)",
            worst[0], worst[1], worst[2]
        ),
    }
}

fn errata_scaling() -> Outcome {
    let f = parse("t^2").unwrap();
    let ratio = |b: f64| {
        let iv = Interval::new(0.0, b).unwrap();
        let x = iv.midpoint();
        let paper = bound_holder(&f, 1, &iv, x, 2.0, Variant::PaperStated).unwrap();
        let corrected = bound_holder(&f, 1, &iv, x, 2.0, Variant::Corrected).unwrap();
        paper / corrected
    };
    let got = ratio(10.0) / ratio(1.0);
    let want = 10f64.powf(1.5);
    let err = rel(got, want);
    Outcome {
        pass: err <= 1e-9,
        detail: format!(
            "ratio of ratios {got:.12} vs 10^1.5 = {want:.12}, rel err {err:.2e} (<= 1e-9)"
        ),
    }
}

fn means() -> Outcome {
    let pair = MeanPair::new(1.0, 2.0).unwrap();
    let l22 = generalized_log_mean_pow(&pair, 2).unwrap();
    let ok_l = (l22 - 7.0 / 3.0).abs() <= 1e-13;

    let x = 1.5;
    let lhs = (l22 - x * x).abs();
    let rhs1 = proposition1_bound(&pair, 2, x).unwrap();
    let ok_p1 = (lhs - 1.0 / 12.0).abs() <= 1e-12 && (rhs1 - 0.75).abs() <= 1e-12;

    let rhs2 = proposition2_bound(&pair, 2, x, 2.0).unwrap();
    let ok_p2 = (rhs2 - 1.441596).abs() <= 1e-6;
    let flag = |b: bool| if b { "ok" } else { "MISMATCH" };
    Outcome {
        pass: ok_l && ok_p1 && ok_p2,
        detail: format!(
            "L_2^2(1,2) = {l22:.15} [{}]; first inequality lhs {lhs:.15} rhs {rhs1:.15} [{}]; power-mean inequality q=2 rhs {rhs2:.9} vs expected 1.441596 [{}]",
            flag(ok_l),
            flag(ok_p1),
            flag(ok_p2)
        ),
    }
}

fn determinism() -> Outcome {
    let specs = default_specs();
    let csv = |threads: Option<usize>| {
        let run = || {
            let mut buf = Vec::new();
            write_csv(&sweep_all(&specs).records, &mut buf).unwrap();
            buf
        };
        match threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .unwrap()
                .install(run),
            None => run(),
        }
    };
    let first = csv(None);
    let second = csv(None);
    let serial = csv(Some(1));
    let rows = first.iter().filter(|&&c| c == b'\n').count();
    Outcome {
        pass: first == second && first == serial && rows > 1,
        detail: format!(
            "{rows} CSV lines; repeat identical: {}; single-thread identical: {}",
            first == second,
            first == serial
        ),
    }
}

fn negative_controls() -> Outcome {
    let entry = find("sin[0,3]").unwrap();
    let f = entry.function().unwrap();
    let ev = Evaluator::new(&f, entry.interval);
    let mut gated = 0usize;
    let mut total = 0usize;
    let mut errors = 0usize;
    for n in 1..=4 {
        for x in entry.interval.grid(9) {
            let form = RuleForm::PointX(x);
            let mut reqs = vec![BoundRequest::convex_direct(n, form)];
            reqs.extend([1.0, 1.5, 2.0, 3.0].map(|q| BoundRequest::power_mean(n, form, q)));
            reqs.extend([1.5, 2.0].map(|p| BoundRequest::holder(n, form, p, Variant::Corrected)));
            for req in reqs {
                total += 1;
                match ev.evaluate(&req) {
                    Ok(r) if !r.valid && !r.convexity.convex => gated += 1,
                    Ok(_) => {}
                    Err(_) => errors += 1,
                }
            }
        }
    }
    Outcome {
        pass: gated >= 1 && errors == 0,
        detail: format!("sin on [0,3]: {gated}/{total} requests rejected by the convexity gate, {errors} errors"),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("identity suite", identity_suite),
        ("equality witnesses", equality_witnesses),
        ("bound validity", validity_suite),
        ("algebraic identities", algebraic_identities),
        ("errata scaling", errata_scaling),
        ("means", means),
        ("determinism", determinism),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {}: {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
