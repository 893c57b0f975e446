//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use logcap_core::capacity::{self, inf_ratio, SolverOptions};
use logcap_core::concavity::{
    cycle_polynomial, hstable_fixtures, random_linear_product, univariate_coefficients, Provenance,
};
use logcap_core::exp_linear::ExpLinearFixture;
use logcap_core::geometry::{d_convex_check, DConvexity, SupportSet};
use logcap_core::inequalities::{
    compute_l, der_midpoint_deficit, exp_taylor, g, l_lower_certificate, verify_exchange, verify_exp_waer,
    verify_inner_product, verify_main_thm, verify_newton_multivariate, Decomposition, Function, MainKind,
    NewtonKind, Verdict,
};
use logcap_core::numeric::{factorial, int, rat, to_f64, vdw};
use logcap_core::permanent::{prod_poly, ryser_permanent, sinkhorn, NonnegMatrix, SINKHORN_MAX_ITER, SINKHORN_TOL};
use logcap_core::poly::inner_product;
use logcap_core::rng::stream;
use logcap_core::sequences::{frozen_counterexample, lc_trajectory_check, WeightSequence};
use logcap_core::{MultiIndex, Rational, SparsePoly};
use num_traits::{One, Zero};
use rand::Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture() -> Provenance {
    Provenance::Constructive("acceptance".into())
}

fn sum_power(n: usize) -> SparsePoly {
    SparsePoly::linear_form(&vec![int(1); n]).unwrap().pow(n as u32)
}

fn alternating(n: usize) -> (MultiIndex, MultiIndex) {
    let y = |parity: usize| MultiIndex::new((0..2 * n).map(|i| if i % 2 == parity { 2 } else { 0 }).collect());
    (y(0), y(1))
}

fn cycle_values() -> Check {
    for n in 2..=4usize {
        let p = cycle_polynomial(n).map_err(|e| e.to_string())?;
        let d0 = p.der_at_zero(&MultiIndex::ones(2 * n)).unwrap();
        ensure(d0 == int(2), || format!("n={n}: Der(R0) = {d0}"))?;
        let (r1, r2) = alternating(n);
        let two_n = int(1 << n);
        let d1 = p.der_at_zero(&r1).unwrap();
        let d2 = p.der_at_zero(&r2).unwrap();
        ensure(d1 == two_n && d2 == two_n, || format!("n={n}: Der(R1), Der(R2) = {d1}, {d2}"))?;
        let deficit = der_midpoint_deficit(&Function::Poly(p), &r1, &r2).unwrap().unwrap();
        let expect = -((n - 1) as f64) * 2f64.ln();
        ensure((deficit - expect).abs() <= 1e-12, || format!("n={n}: deficit {deficit} vs {expect}"))?;
    }
    Ok(())
}

fn paired_cubes() -> Check {
    let xy = SparsePoly::linear_form(&[int(1), int(1), int(0), int(0)]).unwrap();
    let vw = SparsePoly::linear_form(&[int(0), int(0), int(1), int(1)]).unwrap();
    let q = xy.pow(3).multiply(&vw).unwrap().add(&vw.pow(3).multiply(&xy).unwrap()).unwrap();
    let cap = capacity::capacity(&q).unwrap().value;
    ensure(((cap - 32.0) / 32.0).abs() <= 1e-5, || format!("Cap(q) = {cap}"))?;
    let der = q.der_at_zero(&MultiIndex::ones(4)).unwrap();
    ensure(der.is_zero(), || format!("Der_q(1,1,1,1) = {der}"))?;
    let reports = verify_main_thm(&Function::Poly(q), MainKind::Homogeneous, &Provenance::User).unwrap();
    let lower = reports.iter().find(|r| r.id == "vdw-lower-homogeneous").ok_or("no lower-bound report")?;
    ensure(lower.verdict == Verdict::Violated, || format!("verdict {:?}", lower.verdict))?;
    ensure(!lower.guaranteed, || "user input reported as guaranteed".into())?;

    // (p')^2 - (4/3) p p'' = (t^2 - 1)^2 for p = t + t^3
    let p = SparsePoly::univariate(&[int(0), int(1), int(0), int(1)]).unwrap();
    let d1 = univariate_coefficients(&p.partial_derivative(&MultiIndex::new(vec![1])).unwrap()).unwrap();
    let d2 = univariate_coefficients(&p.partial_derivative(&MultiIndex::new(vec![2])).unwrap()).unwrap();
    let c0 = univariate_coefficients(&p).unwrap();
    for k in 0..10i64 {
        let t = rat(2 * k - 7, 3);
        let a = common::horner(&d1, &t);
        let residual = &a * &a - rat(4, 3) * common::horner(&c0, &t) * common::horner(&d2, &t);
        let s = &t * &t - Rational::one();
        ensure(residual == &s * &s, || format!("residual at t = {t}"))?;
    }
    Ok(())
}

fn equality_cases() -> Check {
    for n in 1..=5usize {
        let r = verify_main_thm(&Function::Poly(sum_power(n)), MainKind::Homogeneous, &fixture()).unwrap();
        let lower = &r[1];
        ensure(lower.relative_slack().abs() <= 1e-6, || format!("n={n}: slack {}", lower.slack))?;
    }
    for coeffs in [vec![int(1)], vec![int(1), int(2)], vec![rat(1, 2), int(3), int(1)]] {
        let n = coeffs.len();
        let f = ExpLinearFixture::new(coeffs).unwrap();
        let der = to_f64(&f.der_at_zero(&MultiIndex::ones(n)).unwrap());
        let bound = (-(n as f64)).exp() * f.c_f(&MultiIndex::ones(n)).unwrap();
        ensure((der - bound).abs() <= 1e-9 * der.max(1.0), || format!("exp n={n}: {der} vs {bound}"))?;
    }
    Ok(())
}

fn doubly_stochastic() -> Check {
    let mut rng = stream(2024, "acceptance-doubly-stochastic");
    for i in 0..100 {
        let n = 2 + i % 7;
        let rows = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(1..=9))).collect()).collect();
        let a = sinkhorn(&NonnegMatrix::new(rows).unwrap(), SINKHORN_TOL, SINKHORN_MAX_ITER)
            .map_err(|e| e.to_string())?
            .matrix;
        let per = ryser_permanent(&a).unwrap();
        ensure(vdw(n as u32) <= per && per <= Rational::one(), || format!("case {i}: per = {}", to_f64(&per)))?;
        let cap = capacity::capacity(&prod_poly(&a).unwrap()).unwrap().value;
        ensure((cap - 1.0).abs() <= 1e-6, || format!("case {i}: Cap(Prod_A) = {cap}"))?;
    }
    for n in 1..=8usize {
        let per = ryser_permanent(&NonnegMatrix::uniform(n)).unwrap();
        ensure(per == vdw(n as u32), || format!("per(J_{n}/{n}) = {per}"))?;
    }
    Ok(())
}

fn constants() -> Check {
    ensure(compute_l(1).value == 1.0, || "L(1)".into())?;
    let l2 = compute_l(2).value;
    let expect = 1.0 / (1.0 + 2f64.sqrt());
    ensure((l2 - expect).abs() <= 1e-10, || format!("L(2) = {l2}"))?;
    // an upper bound on 1/e: alternating partial sum ending on a positive term
    let inv_e_upper: Rational = (0..=100u32)
        .map(|j| {
            let t = Rational::new(1.into(), factorial(j));
            if j % 2 == 0 { t } else { -t }
        })
        .sum();
    for n in 1..=50u32 {
        let l = compute_l(n);
        ensure(l.value <= 1.0 + 1e-15, || format!("L({n}) = {} > 1", l.value))?;
        // L(n) >= 1/exp_n(1) > 1/exp_{n+1}(1) > ... > 1/e
        ensure(l_lower_certificate(n) > inv_e_upper, || format!("certificate for L({n})"))?;
        ensure(exp_taylor(n, &Rational::one()) < exp_taylor(n + 1, &Rational::one()), || format!("exp_{n}(1)"))?;
        ensure(to_f64(&l_lower_certificate(n)) <= l.upper * (1.0 + 1e-14), || format!("L({n}) below certificate"))?;
        ensure(vdw(n + 1) < vdw(n), || format!("vdw({}) >= vdw({n})", n + 1))?;
        if n >= 2 {
            ensure(g(n + 1) < g(n), || format!("g({}) >= g({n})", n + 1))?;
            ensure(g(n) > inv_e_upper, || format!("g({n}) <= 1/e"))?;
        }
    }
    Ok(())
}

fn propagation() -> Check {
    let mut rng = stream(2024, "acceptance-propagation");
    let grid = [int(0), rat(1, 2), int(1), int(2), int(5)];
    for i in 0..20 {
        let n = 2 + i % 5;
        let roots: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
        let p = SparsePoly::univariate(&common::real_rooted(&roots)).unwrap();
        let b = WeightSequence::factorial_tail(n as u32);
        let r = lc_trajectory_check(&b, &p, &grid).map_err(|e| e.to_string())?;
        ensure(r.propagatable && r.precondition, || format!("fixture {i}: preconditions"))?;
        ensure(r.all_in_lc && r.flow_matches, || format!("fixture {i}: left LC"))?;
    }
    let (b, p, t) = frozen_counterexample();
    let r = lc_trajectory_check(&b, &p, &[Rational::zero(), t]).unwrap();
    ensure(!r.propagatable && r.precondition, || "counterexample preconditions".into())?;
    ensure(r.points[0].in_lc && !r.points[1].in_lc, || "counterexample stays in LC".into())
}

fn inner_products() -> Check {
    let sq = SparsePoly::linear_form(&[int(1), int(1)]).unwrap().pow(2);
    let l = [int(1), int(1)];
    let opts = SolverOptions::default();
    let a = inf_ratio(&sq, &l, &opts).unwrap().value;
    ensure((a - 4.0).abs() <= 1e-6, || format!("A = {a}"))?;
    ensure(inner_product(&sq, &sq).unwrap() == int(6), || "<p,p> != 6".into())?;
    let r = verify_inner_product(&sq, &sq, &l, &fixture()).unwrap();
    ensure((r[0].right - 6.0).abs() <= 1e-6 && r[0].holds(), || format!("bound {}", r[0].right))?;
    let mut rng = stream(2024, "acceptance-inner-product");
    for i in 0..20 {
        let m = 2 + i % 2;
        let n = 2 + (i / 2) % 3;
        let p = random_linear_product(&mut rng, m, n, 5).unwrap();
        let q = random_linear_product(&mut rng, m, n, 5).unwrap();
        let l = vec![Rational::new((n as i64).into(), (m as i64).into()); m];
        let r = verify_inner_product(&p, &q, &l, &fixture()).unwrap();
        let main = r.iter().find(|b| b.id == "inner-product-lower").unwrap();
        ensure(main.holds(), || format!("random pair {i}: {main:?}"))?;
    }
    Ok(())
}

fn d_convexity() -> Check {
    for fx in hstable_fixtures() {
        let r = d_convex_check(&SupportSet::of(&fx.poly)).unwrap();
        ensure(r.is_d_convex(), || format!("{}: {r:?}", fx.name))?;
    }
    let mut rng = stream(2024, "acceptance-dconvex");
    for _ in 0..10 {
        let p = random_linear_product(&mut rng, 3, 3, 3).unwrap();
        ensure(d_convex_check(&SupportSet::of(&p)).unwrap().is_d_convex(), || "random product".into())?;
    }
    let gap = SparsePoly::univariate(&[int(1), int(0), int(1)]).unwrap();
    let r = d_convex_check(&SupportSet::of(&gap)).unwrap();
    ensure(
        r == DConvexity::Counterexample { point: MultiIndex::new(vec![1]) },
        || format!("supp(1+t^2): {r:?}"),
    )
}

fn property_suites() -> Check {
    let mut rng = stream(2024, "acceptance-grid");
    for i in 0..30 {
        let m = 1 + i % 3;
        let p = common::random_poly(&mut rng, m, 2 + i % 5, 3);
        let r = MultiIndex::new((0..m).map(|_| rng.gen_range(0..=3)).collect());
        let solver = capacity::c_f_at(&p, &r).unwrap().value;
        let grid = common::grid_capacity(&p, &r);
        let ok = if solver == 0.0 {
            grid <= 1e-4
        } else {
            ((solver - grid) / grid).abs() <= 1e-4
        };
        ensure(ok, || format!("case {i}: solver {solver} vs grid {grid}"))?;
    }
    let mut rng = stream(2024, "acceptance-upper-bound");
    for i in 0..200 {
        let m = 1 + i % 4;
        let p = common::random_poly(&mut rng, m, 1 + i % 6, 5 / m as u32 + 1);
        let caps = p.variable_degrees();
        let r = MultiIndex::new(caps.iter().map(|&c| rng.gen_range(0..=c)).collect());
        let reports = verify_exp_waer(&Function::Poly(p), &r, &Provenance::User).unwrap();
        ensure(reports[0].holds() && reports[0].guaranteed, || format!("case {i}: {:?}", reports[0]))?;
    }
    let mut rng = stream(2024, "acceptance-split");
    for i in 0..50 {
        let m = 1 + i % 3;
        let p = common::random_poly(&mut rng, m, 1 + i % 4, 3);
        let support = p.support();
        let r = &support[rng.gen_range(0..support.len())];
        if r.total() == 0 {
            continue;
        }
        let split = p.split_variables(r).unwrap();
        let left = p.der_at_zero(r).unwrap();
        let right = split.der_at_zero(&MultiIndex::ones(r.total() as usize)).unwrap();
        ensure(left == right, || format!("case {i}: {left} vs {right}"))?;
    }
    Ok(())
}

fn newton_multivariate() -> Check {
    for n in 2..=5usize {
        let p = Function::Poly(sum_power(n));
        let dec = Decomposition {
            y0: MultiIndex::ones(n),
            parts: (0..n).map(|i| (rat(1, n as i64), MultiIndex::unit(n, i, n as u32))).collect(),
        };
        let r = verify_newton_multivariate(&p, &dec, NewtonKind::Homogeneous, &fixture()).unwrap();
        // every derivative is n! and the constant is exactly 1
        let nf = Rational::from_integer(factorial(n as u32));
        ensure(p.der_at_zero(&dec.y0).unwrap() == nf, || format!("n={n}: Der(Y0)"))?;
        for (_, y) in &dec.parts {
            ensure(p.der_at_zero(y).unwrap() == nf, || format!("n={n}: Der(Y_i)"))?;
        }
        ensure(r.exact == Some(true) && r.relative_slack().abs() <= 1e-12, || format!("n={n}: {r:?}"))?;
    }
    for n in 2..=3usize {
        let c = Function::Poly(cycle_polynomial(n).unwrap());
        let (y1, y2) = alternating(n);
        let dec = Decomposition::midpoint(y1, y2).unwrap();
        let r = verify_newton_multivariate(&c, &dec, NewtonKind::Sparse { k: 2 }, &fixture()).unwrap();
        ensure(r.exact == Some(true), || format!("cycle n={n}: {r:?}"))?;
        ensure(r.left == 2.0 && (r.right - 2.0).abs() <= 1e-12, || format!("cycle n={n}: {r:?}"))?;
    }
    let cube = SparsePoly::linear_form(&[int(1), int(1)]).unwrap().pow(3);
    let r = verify_exchange(&cube, &MultiIndex::new(vec![2, 1]), 0, 1, &fixture()).unwrap();
    ensure(r.exact == Some(true) && r.left == 6.0, || format!("exchange: {r:?}"))
}

/// Description, runtime limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("cycle polynomial derivatives and midpoint deficit", 1, cycle_values),
        ("paired cubes: capacity 32, zero derivative, violation detected", 5, paired_cubes),
        ("equality cases of the main lower bounds", 5, equality_cases),
        ("doubly stochastic permanents and Prod_A capacity", 60, doubly_stochastic),
        ("constants L(n), vdw(n), g(k)", 1, constants),
        ("log-concavity along the shift flow, both directions", 5, propagation),
        ("inner-product lower bound", 30, inner_products),
        ("D-convexity of fixture supports", 30, d_convexity),
        ("capacity grid oracle, universal upper bound, variable splitting", 120, property_suites),
        ("multivariate Newton inequalities", 10, newton_multivariate),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(elapsed < Duration::from_secs(*limit), || format!("took longer than {limit} s"))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2} PASS ({:.3} s, limit {limit} s): {name}", i + 1, elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} FAIL ({:.3} s, limit {limit} s): {name}: {e}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
