//! Named batches of checks over the fixture catalog.

use rand::Rng;
use rayon::prelude::*;

use super::report::BoundReport;
use super::verify::{
    cf_midpoint, verify_cf_logconcavity, verify_exchange, verify_inner_product, verify_main_thm,
    verify_monomial_bounds, verify_newton_multivariate, verify_schrijver, Decomposition, Function, MainKind,
    NewtonKind,
};
use crate::concavity::{cycle_polynomial, elementary_symmetric, hstable_fixtures, random_linear_product, Fixture, Provenance};
use crate::error::{Error, Result};
use crate::exp_linear::ExpLinearFixture;
use crate::geometry::compositions;
use crate::numeric::{int, rat, Rational};
use crate::permanent::{sinkhorn, vdw_bounds_check, NonnegMatrix, SINKHORN_MAX_ITER, SINKHORN_TOL};
use crate::poly::{MultiIndex, SparsePoly};
use crate::rng;

pub const SUITES: &[&str] = &[
    "all",
    "main",
    "monomial",
    "schrijver",
    "inner-product",
    "newton",
    "exchange",
    "cf-logconcavity",
    "permanent",
];

type Task = Box<dyn Fn() -> Result<Vec<BoundReport>> + Send + Sync>;

fn exp_fixtures() -> Vec<(String, ExpLinearFixture)> {
    let build = |c: Vec<Rational>| ExpLinearFixture::new(c).expect("positive coefficients");
    vec![
        ("exp-ones-2".into(), build(vec![int(1), int(1)])),
        ("exp-weighted-3".into(), build(vec![int(1), int(2), int(3)])),
        ("exp-fractional-2".into(), build(vec![rat(1, 2), int(2)])),
    ]
}

fn constructive(label: &str) -> Provenance {
    Provenance::Constructive(label.to_string())
}

fn main_tasks(fixtures: &[Fixture]) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for fx in fixtures {
        let f = Function::Poly(fx.poly.clone());
        let prov = fx.provenance.clone();
        let homogeneous = fx.poly.homogeneous_degree() == Some(fx.poly.num_vars() as u32);
        tasks.push(Box::new(move || {
            let mut out = Vec::new();
            if homogeneous {
                out.extend(verify_main_thm(&f, MainKind::Homogeneous, &prov)?);
            }
            out.extend(verify_main_thm(&f, MainKind::Polynomial, &prov)?.into_iter().skip(1));
            out.extend(verify_main_thm(&f, MainKind::Entire, &prov)?.into_iter().skip(1));
            Ok(out)
        }));
    }
    for (name, e) in exp_fixtures() {
        let f = Function::ExpLinear(e);
        tasks.push(Box::new(move || verify_main_thm(&f, MainKind::Entire, &constructive(&name))));
    }
    tasks
}

/// Up to `limit` targets in the box of variable degrees, on the degree level
/// for homogeneous inputs.
fn targets(p: &SparsePoly, limit: usize) -> Vec<MultiIndex> {
    let caps = p.variable_degrees();
    let level = p.homogeneous_degree().unwrap_or(p.total_degree());
    compositions(p.num_vars(), level)
        .into_iter()
        .filter(|r| r.entries().iter().zip(&caps).all(|(a, b)| a <= b))
        .take(limit)
        .collect()
}

fn monomial_tasks(fixtures: &[Fixture]) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for fx in fixtures {
        let f = Function::Poly(fx.poly.clone());
        let prov = fx.provenance.clone();
        let rs = targets(&fx.poly, 6);
        tasks.push(Box::new(move || {
            let mut out = Vec::new();
            for r in &rs {
                out.extend(verify_monomial_bounds(&f, r, &prov)?);
            }
            Ok(out)
        }));
    }
    for (name, e) in exp_fixtures() {
        let m = e.num_vars();
        let f = Function::ExpLinear(e);
        tasks.push(Box::new(move || {
            let prov = constructive(&name);
            let mut out = Vec::new();
            for r in [MultiIndex::ones(m), MultiIndex::unit(m, 0, 3), MultiIndex::zeros(m)] {
                out.extend(verify_monomial_bounds(&f, &r, &prov)?);
            }
            Ok(out)
        }));
    }
    tasks
}

fn schrijver_tasks(fixtures: &[Fixture]) -> Vec<Task> {
    fixtures
        .iter()
        .filter(|fx| fx.poly.homogeneous_degree() == Some(fx.poly.num_vars() as u32))
        .map(|fx| {
            let p = fx.poly.clone();
            let prov = fx.provenance.clone();
            let k = p.variable_degrees().into_iter().max().unwrap_or(1).max(1);
            Box::new(move || verify_schrijver(&p, k, &prov)) as Task
        })
        .collect()
}

fn inner_product_tasks(seed: u64) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    let square = SparsePoly::linear_form(&[int(1), int(1)]).expect("valid form").pow(2);
    let mono = SparsePoly::monomial(MultiIndex::ones(2), int(1));
    let e42 = elementary_symmetric(4, 2).expect("valid sizes");
    let half = vec![rat(1, 2); 4];
    let cases = vec![
        ("sum-squared", square.clone(), square, vec![int(1), int(1)]),
        ("monomial-x1x2", mono.clone(), mono, vec![int(1), int(1)]),
        ("elementary-symmetric-4-2", e42.clone(), e42, half),
    ];
    for (name, p, q, l) in cases {
        tasks.push(Box::new(move || verify_inner_product(&p, &q, &l, &constructive(name))));
    }
    let mut gen = rng::stream(seed, "suite-inner-product");
    for i in 0..4 {
        let m = 2 + i % 2;
        let n = 2 + i / 2;
        let p = random_linear_product(&mut gen, m, n, 4).expect("valid sizes");
        let q = random_linear_product(&mut gen, m, n, 4).expect("valid sizes");
        let l = vec![Rational::new((n as i64).into(), (m as i64).into()); m];
        tasks.push(Box::new(move || {
            verify_inner_product(&p, &q, &l, &constructive("random product of positive linear forms"))
        }));
    }
    tasks
}

fn newton_tasks(fixtures: &[Fixture]) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for n in 2..=5usize {
        let p = Function::Poly(SparsePoly::linear_form(&vec![int(1); n]).expect("valid form").pow(n as u32));
        let dec = Decomposition {
            y0: MultiIndex::ones(n),
            parts: (0..n).map(|i| (rat(1, n as i64), MultiIndex::unit(n, i, n as u32))).collect(),
        };
        tasks.push(Box::new(move || {
            Ok(vec![verify_newton_multivariate(
                &p,
                &dec,
                NewtonKind::Homogeneous,
                &constructive("power of a nonnegative linear form"),
            )?])
        }));
    }
    for n in 2..=3usize {
        let c = Function::Poly(cycle_polynomial(n).expect("n >= 1"));
        let (y1, y2) = alternating(n);
        let dec = Decomposition::midpoint(y1, y2).expect("even sum");
        tasks.push(Box::new(move || {
            let prov = constructive("product of nonnegative linear forms");
            Ok(vec![
                verify_newton_multivariate(&c, &dec, NewtonKind::Sparse { k: 2 }, &prov)?,
                verify_newton_multivariate(&c, &dec, NewtonKind::Homogeneous, &prov)?,
                verify_newton_multivariate(&c, &dec, NewtonKind::Entire, &prov)?,
            ])
        }));
    }
    for fx in fixtures {
        let m = fx.poly.num_vars();
        let Some(level) = fx.poly.homogeneous_degree() else { continue };
        if level as usize != m {
            continue;
        }
        let f = Function::Poly(fx.poly.clone());
        let prov = fx.provenance.clone();
        let k = fx.poly.variable_degrees().into_iter().max().unwrap_or(1).max(1);
        // Y_0 = 1 as the average of the cyclic shifts of a support point
        let v = fx.poly.support().into_iter().next().expect("nonzero fixture");
        let spread = Decomposition {
            y0: MultiIndex::ones(m),
            parts: (0..m)
                .map(|i| {
                    let y = (0..m).map(|j| v.entries()[(j + i) % m]).collect();
                    (rat(1, m as i64), MultiIndex::new(y))
                })
                .collect(),
        };
        tasks.push(Box::new(move || {
            Ok(vec![
                verify_newton_multivariate(&f, &spread, NewtonKind::Homogeneous, &prov)?,
                verify_newton_multivariate(&f, &spread, NewtonKind::Sparse { k }, &prov)?,
            ])
        }));
    }
    for (name, e) in exp_fixtures() {
        let m = e.num_vars();
        let f = Function::ExpLinear(e);
        let y1 = MultiIndex::unit(m, 0, 2);
        let y2 = MultiIndex::unit(m, m - 1, 2);
        let dec = Decomposition::midpoint(y1, y2).expect("even sum");
        tasks.push(Box::new(move || {
            Ok(vec![verify_newton_multivariate(&f, &dec, NewtonKind::Entire, &constructive(&name))?])
        }));
    }
    tasks
}

/// `(2, 0, 2, 0, ...)` and `(0, 2, 0, 2, ...)` in `2n` variables.
pub(crate) fn alternating(n: usize) -> (MultiIndex, MultiIndex) {
    let y = |parity: usize| MultiIndex::new((0..2 * n).map(|i| if i % 2 == parity { 2 } else { 0 }).collect());
    (y(0), y(1))
}

fn exchange_tasks(fixtures: &[Fixture]) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    let cube = SparsePoly::linear_form(&[int(1), int(1)]).expect("valid form").pow(3);
    tasks.push(Box::new(move || {
        Ok(vec![verify_exchange(
            &cube,
            &MultiIndex::new(vec![2, 1]),
            0,
            1,
            &constructive("power of a nonnegative linear form"),
        )?])
    }));
    for fx in fixtures {
        let p = fx.poly.clone();
        let prov = fx.provenance.clone();
        let rs = targets(&p, 4);
        tasks.push(Box::new(move || {
            let m = p.num_vars();
            let mut out = Vec::new();
            for r in &rs {
                for (i, j) in [(0, 1), (0, m - 1)] {
                    if i != j && r.entries()[i] > 0 && r.entries()[j] > 0 {
                        out.push(verify_exchange(&p, r, i, j, &prov)?);
                    }
                }
            }
            Ok(out)
        }));
    }
    tasks
}

fn cf_tasks(fixtures: &[Fixture], seed: u64) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for fx in fixtures {
        let f = Function::Poly(fx.poly.clone());
        let prov = fx.provenance.clone();
        tasks.push(Box::new(move || verify_cf_logconcavity(&f, 3, seed, &prov)));
    }
    for n in 2..=3usize {
        let c = Function::Poly(cycle_polynomial(n).expect("n >= 1"));
        let (y1, y2) = alternating(n);
        tasks.push(Box::new(move || {
            Ok(vec![cf_midpoint(&c, &y1, &y2, &constructive("product of nonnegative linear forms"))?])
        }));
    }
    let quartic = Function::Poly(SparsePoly::linear_form(&[int(1), int(1)]).expect("valid form").pow(4));
    tasks.push(Box::new(move || {
        Ok(vec![cf_midpoint(
            &quartic,
            &MultiIndex::new(vec![4, 0]),
            &MultiIndex::new(vec![0, 4]),
            &constructive("power of a nonnegative linear form"),
        )?])
    }));
    for (name, e) in exp_fixtures() {
        let f = Function::ExpLinear(e);
        tasks.push(Box::new(move || verify_cf_logconcavity(&f, 3, seed, &constructive(&name))));
    }
    tasks
}

/// Random positive integer matrix scaled to doubly stochastic.
pub(crate) fn random_doubly_stochastic<R: Rng>(rng: &mut R, n: usize) -> Result<NonnegMatrix> {
    let rows = (0..n).map(|_| (0..n).map(|_| int(rng.gen_range(1..=9))).collect()).collect();
    Ok(sinkhorn(&NonnegMatrix::new(rows)?, SINKHORN_TOL, SINKHORN_MAX_ITER)?.matrix)
}

fn permanent_tasks(seed: u64) -> Vec<Task> {
    let mut tasks: Vec<Task> = Vec::new();
    for n in 2..=5 {
        tasks.push(Box::new(move || vdw_bounds_check(&NonnegMatrix::uniform(n))));
    }
    tasks.push(Box::new(|| vdw_bounds_check(&NonnegMatrix::identity(3))));
    let mut gen = rng::stream(seed, "suite-permanent");
    for n in [3usize, 4, 5] {
        match random_doubly_stochastic(&mut gen, n) {
            Ok(a) => tasks.push(Box::new(move || vdw_bounds_check(&a))),
            Err(e) => {
                let msg = e.to_string();
                tasks.push(Box::new(move || Err(Error::InvalidArgument(msg.clone()))));
            }
        }
    }
    tasks
}

/// Runs the named suite. Checks run in parallel; the result is ordered by
/// report id and, within an id, by construction order.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<BoundReport>> {
    let fixtures = hstable_fixtures();
    let all = name == "all";
    let mut tasks: Vec<Task> = Vec::new();
    let mut matched = false;
    let mut add = |suite: &str, build: &dyn Fn() -> Vec<Task>| {
        if all || name == suite {
            matched = true;
            tasks.extend(build());
        }
    };
    add("main", &|| main_tasks(&fixtures));
    add("monomial", &|| monomial_tasks(&fixtures));
    add("schrijver", &|| schrijver_tasks(&fixtures));
    add("inner-product", &|| inner_product_tasks(seed));
    add("newton", &|| newton_tasks(&fixtures));
    add("exchange", &|| exchange_tasks(&fixtures));
    add("cf-logconcavity", &|| cf_tasks(&fixtures, seed));
    add("permanent", &|| permanent_tasks(seed));
    if !matched {
        return Err(Error::InvalidArgument(format!(
            "unknown suite {name:?}; expected one of {}",
            SUITES.join(", ")
        )));
    }
    let batches = tasks.par_iter().map(|t| t()).collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<BoundReport> = batches.into_iter().flatten().collect();
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}
