mod common;

use logcap_core::concavity::{cycle_polynomial, hstable_fixtures};
use logcap_core::geometry::{
    d_convex_check, deg_subset, newton_polytope_membership, rado_check, submodularity_check, DConvexity, DegFunction,
    SupportSet,
};
use logcap_core::numeric::int;
use logcap_core::rng::stream;
use logcap_core::{MultiIndex, Rational, SparsePoly};
use rand::Rng;

fn random_points<R: Rng>(rng: &mut R, m: usize, count: usize, max: u32) -> Vec<MultiIndex> {
    (0..count)
        .map(|_| MultiIndex::new((0..m).map(|_| rng.gen_range(0..=max)).collect()))
        .collect()
}

#[test]
fn hull_membership_matches_caratheodory() {
    let mut rng = stream(21, "hull-oracle");
    for _ in 0..60 {
        let m = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=6);
        let pts = random_points(&mut rng, m, count, 4);
        let s = SupportSet::new(m, pts.clone()).unwrap();
        for _ in 0..10 {
            let z: Vec<Rational> = (0..m).map(|_| Rational::new(rng.gen_range(0..=8).into(), 2.into())).collect();
            assert_eq!(s.hull_contains(&z).unwrap(), common::caratheodory_contains(s.points(), &z), "{pts:?} {z:?}");
        }
    }
}

/// Box enumeration with the Caratheodory oracle in place of the LP.
fn naive_d_convex(s: &SupportSet) -> DConvexity {
    let m = s.dim();
    let hi: Vec<u32> = (0..m).map(|i| s.points().iter().map(|p| p.entries()[i]).max().unwrap()).collect();
    let lo: Vec<u32> = (0..m).map(|i| s.points().iter().map(|p| p.entries()[i]).min().unwrap()).collect();
    let mut candidates = vec![Vec::new()];
    for i in 0..m {
        candidates = candidates
            .into_iter()
            .flat_map(|c: Vec<u32>| (lo[i]..=hi[i]).map(move |v| [c.clone(), vec![v]].concat()))
            .collect();
    }
    let mut pts: Vec<MultiIndex> = candidates.into_iter().map(MultiIndex::new).collect();
    pts.sort();
    for z in pts {
        if !s.contains(&z) && common::caratheodory_contains(s.points(), &z.to_rationals()) {
            return DConvexity::Counterexample { point: z };
        }
    }
    DConvexity::DConvex
}

#[test]
fn d_convexity_matches_naive_oracle() {
    let mut rng = stream(22, "dconvex-oracle");
    for _ in 0..60 {
        let m = rng.gen_range(1..=3);
        let count = rng.gen_range(1..=5);
        let s = SupportSet::new(m, random_points(&mut rng, m, count, 3)).unwrap();
        let fast = d_convex_check(&s).unwrap();
        let naive = naive_d_convex(&s);
        assert_eq!(fast.is_d_convex(), naive.is_d_convex());
        if let (DConvexity::Counterexample { point: a }, DConvexity::Counterexample { point: b }) = (&fast, &naive) {
            // both report the first point in graded-lex order
            assert_eq!(a, b);
        }
    }
}

#[test]
fn fixture_supports_are_d_convex_and_rado() {
    for fx in hstable_fixtures() {
        let s = SupportSet::of(&fx.poly);
        assert!(d_convex_check(&s).unwrap().is_d_convex(), "{}", fx.name);
        if fx.poly.is_homogeneous() {
            let r = rado_check(&fx.poly).unwrap();
            assert!(r.holds, "{}: {:?}", fx.name, r.violations);
        }
        let sub = submodularity_check(&DegFunction::of(&fx.poly).unwrap());
        assert!(sub.submodular, "{}", fx.name);
    }
}

#[test]
fn membership_examples() {
    let gap = SupportSet::new(1, [MultiIndex::new(vec![0]), MultiIndex::new(vec![2])]).unwrap();
    assert!(newton_polytope_membership(&gap, &MultiIndex::new(vec![1])).unwrap());
    let sq = SparsePoly::linear_form(&[int(1), int(1)]).unwrap().pow(2);
    assert!(!newton_polytope_membership(&SupportSet::of(&sq), &MultiIndex::new(vec![3, 0])).unwrap());
    let c = cycle_polynomial(2).unwrap();
    assert_eq!(deg_subset(&c, 0b0101), 4);
    assert_eq!(deg_subset(&c, 0), 0);
    assert_eq!(deg_subset(&sq, 0b01), 2);
}

#[test]
fn modular_and_non_submodular_degrees() {
    let mono = SparsePoly::monomial(MultiIndex::new(vec![2, 1, 3]), int(1));
    let r = submodularity_check(&DegFunction::of(&mono).unwrap());
    assert!(r.submodular && r.modular);
    // x1^2 + x2^2: Deg({1}) + Deg({2}) = 4 >= Deg({1,2}) + Deg({}) = 2, submodular
    let squares = SparsePoly::from_terms(2, [(MultiIndex::new(vec![2, 0]), int(1)), (MultiIndex::new(vec![0, 2]), int(1))]).unwrap();
    let r = submodularity_check(&DegFunction::of(&squares).unwrap());
    assert!(r.submodular && !r.modular);
    // x1^2 + x2^2 is not the support of an H-stable polynomial: (1,1) obeys every subset bound
    let rado = rado_check(&squares).unwrap();
    assert!(!rado.holds);
}
