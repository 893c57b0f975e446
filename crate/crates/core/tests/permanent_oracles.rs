mod common;

use logcap_core::capacity;
use logcap_core::concavity::Provenance;
use logcap_core::inequalities::verify_schrijver;
use logcap_core::numeric::{int, rat, vdw};
use logcap_core::permanent::{
    prod_poly, ryser_permanent, ryser_permanent_f64, sinkhorn, vdw_bounds_check, NonnegMatrix, SINKHORN_MAX_ITER,
    SINKHORN_TOL,
};
use logcap_core::rng::stream;
use logcap_core::{MultiIndex, Rational};
use num_traits::One;
use rand::Rng;

fn random_matrix<R: Rng>(rng: &mut R, n: usize, zero_prob: f64) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    if rng.gen_bool(zero_prob) {
                        int(0)
                    } else {
                        rat(rng.gen_range(1..=9), rng.gen_range(1..=5))
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn ryser_matches_brute_force_and_derivative() {
    let mut rng = stream(51, "permanent-oracle");
    for i in 0..40 {
        let n = 1 + i % 8;
        let mut rows = random_matrix(&mut rng, n, 0.3);
        for (k, row) in rows.iter_mut().enumerate() {
            if row.iter().all(|v| *v == int(0)) {
                row[k] = int(1);
            }
        }
        let expect = common::brute_permanent(&rows);
        let a = NonnegMatrix::new(rows).unwrap();
        assert_eq!(ryser_permanent(&a).unwrap(), expect, "case {i}");
        assert_eq!(prod_poly(&a).unwrap().der_at_zero(&MultiIndex::ones(n)).unwrap(), expect, "case {i}");
        let approx = ryser_permanent_f64(&a.to_f64()).unwrap();
        let exact = logcap_core::numeric::to_f64(&expect);
        assert!((approx - exact).abs() <= 1e-9 * exact.max(1.0));
    }
}

#[test]
fn doubly_stochastic_bounds() {
    let mut rng = stream(52, "doubly-stochastic");
    for n in 2..=7 {
        let rows = random_matrix(&mut rng, n, 0.0);
        let a = sinkhorn(&NonnegMatrix::new(rows).unwrap(), SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap().matrix;
        assert!(a.is_doubly_stochastic(1e-9));
        let per = ryser_permanent(&a).unwrap();
        assert!(vdw(n as u32) <= per && per <= Rational::one());
        for r in vdw_bounds_check(&a).unwrap() {
            assert!(r.holds(), "{r:?}");
        }
    }
    for n in 2..=6 {
        let r = vdw_bounds_check(&NonnegMatrix::uniform(n)).unwrap();
        assert_eq!(r[0].exact, Some(true));
        assert!(r[0].slack.abs() < 1e-15);
    }
    let perm = NonnegMatrix::new(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
    let r = vdw_bounds_check(&perm).unwrap();
    assert_eq!(r[1].slack, 0.0);
}

#[test]
fn sinkhorn_examples() {
    let id = NonnegMatrix::identity(3);
    let s = sinkhorn(&id, SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
    assert!(s.iterations <= 1);
    let tri = NonnegMatrix::new(vec![vec![int(1), int(1)], vec![int(0), int(1)]]).unwrap();
    let s = sinkhorn(&tri, SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
    assert!(s.deviation <= SINKHORN_TOL);
    assert_eq!(s.matrix, NonnegMatrix::identity(2));
    let singular = NonnegMatrix::new(vec![vec![int(1), int(1)], vec![int(0), int(0)]]);
    // a zero row is rejected at construction or by the scaling
    if let Ok(m) = singular {
        assert!(sinkhorn(&m, SINKHORN_TOL, SINKHORN_MAX_ITER).is_err());
    }
    let no_matching = NonnegMatrix::new(vec![
        vec![int(1), int(0), int(0)],
        vec![int(1), int(0), int(0)],
        vec![int(1), int(1), int(1)],
    ])
    .unwrap();
    assert!(sinkhorn(&no_matching, SINKHORN_TOL, SINKHORN_MAX_ITER).is_err());
}

/// `A / k` for the circulant `k`-regular bipartite adjacency matrix.
fn circulant(n: usize, k: usize) -> NonnegMatrix {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| if (j + n - i) % n < k { rat(1, k as i64) } else { int(0) }).collect())
        .collect();
    NonnegMatrix::new(rows).unwrap()
}

#[test]
fn schrijver_on_regular_bipartite_graphs() {
    for (n, k) in [(4, 2), (5, 2), (6, 2), (5, 3), (6, 3)] {
        let a = circulant(n, k);
        let p = prod_poly(&a).unwrap();
        let reports = verify_schrijver(&p, k as u32, &Provenance::Constructive("row product".into())).unwrap();
        for r in &reports {
            assert!(r.holds(), "n={n} k={k}: {r:?}");
        }
        let cap = capacity::capacity(&p).unwrap().value;
        assert!((cap - 1.0).abs() < 1e-6);
    }
}
