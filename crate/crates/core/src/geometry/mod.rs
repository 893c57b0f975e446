//! Exact lattice geometry of supports: Newton polytope membership, minimal
//! faces, D-convexity, and the subset-degree function with its Hall–Rado type
//! support test.

mod deg;
pub(crate) mod lp;

pub use deg::{
    compositions, deg_subset, rado_check, submodularity_check, DegFunction, RadoReport, RadoViolation,
    SubmodularityReport, SubmodularityViolation,
};

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::poly::{MultiIndex, SparsePoly};
use lp::LpOutcome;

/// Finite set of lattice points in `Z_+^m`, kept sorted graded-lex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    dim: usize,
    points: Vec<MultiIndex>,
}

impl SupportSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let mut pts: Vec<MultiIndex> = points.into_iter().collect();
        if let Some(bad) = pts.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        pts.sort();
        pts.dedup();
        Ok(SupportSet { dim, points: pts })
    }

    pub fn of(p: &SparsePoly) -> Self {
        SupportSet {
            dim: p.num_vars(),
            points: p.support(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[MultiIndex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, z: &MultiIndex) -> bool {
        self.points.binary_search(z).is_ok()
    }

    fn constraint_matrix(&self) -> Vec<Vec<Rational>> {
        let mut a: Vec<Vec<Rational>> = (0..self.dim)
            .map(|i| {
                self.points
                    .iter()
                    .map(|p| Rational::from_integer(p.entries()[i].into()))
                    .collect()
            })
            .collect();
        a.push(vec![Rational::one(); self.points.len()]);
        a
    }

    fn rhs(&self, z: &[Rational]) -> Vec<Rational> {
        let mut b = z.to_vec();
        b.push(Rational::one());
        b
    }

    /// Exact test of `z in Conv(S)` for a rational point `z`.
    pub fn hull_contains(&self, z: &[Rational]) -> Result<bool> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        if self.points.is_empty() {
            return Ok(false);
        }
        let zero = vec![Rational::zero(); self.points.len()];
        Ok(matches!(
            lp::solve(&self.constraint_matrix(), &self.rhs(z), &zero),
            LpOutcome::Optimal { .. }
        ))
    }

    /// Indices of the support points lying on the smallest face of `Conv(S)`
    /// containing `z`, or `None` when `z` is outside the hull.
    ///
    /// A point belongs to that face iff it carries positive weight in some
    /// convex representation of `z`, which one LP per undecided point settles.
    pub fn minimal_face(&self, z: &[Rational]) -> Result<Option<Vec<usize>>> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        let n = self.points.len();
        if n == 0 {
            return Ok(None);
        }
        let a = self.constraint_matrix();
        let b = self.rhs(z);
        let mut in_face = vec![false; n];
        let mut decided = vec![false; n];
        let mut any_feasible = false;
        for j in 0..n {
            if decided[j] {
                continue;
            }
            let mut cost = vec![Rational::zero(); n];
            cost[j] = Rational::one();
            match lp::solve(&a, &b, &cost) {
                LpOutcome::Infeasible => return Ok(None),
                LpOutcome::Unbounded => unreachable!("weights lie in the simplex"),
                LpOutcome::Optimal { x, .. } => {
                    any_feasible = true;
                    for (i, xi) in x.iter().enumerate() {
                        if xi.is_positive() {
                            in_face[i] = true;
                            decided[i] = true;
                        }
                    }
                    decided[j] = true;
                }
            }
        }
        debug_assert!(any_feasible);
        Ok(Some((0..n).filter(|&i| in_face[i]).collect()))
    }

    fn bounding_box(&self) -> (Vec<u32>, Vec<u32>) {
        let mut lo = vec![u32::MAX; self.dim];
        let mut hi = vec![0; self.dim];
        for p in &self.points {
            for (i, &v) in p.entries().iter().enumerate() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        (lo, hi)
    }

    /// Common `|s|_1` of all points, if they share one.
    fn common_total(&self) -> Option<u32> {
        let d = self.points.first()?.total();
        self.points.iter().all(|p| p.total() == d).then_some(d)
    }
}

/// `z in Newt(S)`, decided by exact LP.
pub fn newton_polytope_membership(s: &SupportSet, z: &MultiIndex) -> Result<bool> {
    if s.contains(z) {
        return Ok(true);
    }
    s.hull_contains(&z.to_rationals())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DConvexity {
    DConvex,
    Counterexample { point: MultiIndex },
}

impl DConvexity {
    pub fn is_d_convex(&self) -> bool {
        matches!(self, DConvexity::DConvex)
    }
}

const MAX_POINTS: usize = 10_000;
const MAX_COORD: u32 = 1_000;
const MAX_BOX: usize = 2_000_000;

/// Checks `Conv(S) ∩ Z^m = S` by enumerating the integer bounding box of `S`.
/// Returns the graded-lex first lattice point of `Conv(S) \ S`, if any.
pub fn d_convex_check(s: &SupportSet) -> Result<DConvexity> {
    if s.is_empty() {
        return Err(Error::EmptySupport);
    }
    if s.len() > MAX_POINTS {
        return Err(Error::TooLarge {
            what: "support size",
            limit: MAX_POINTS,
            found: s.len(),
        });
    }
    let (lo, hi) = s.bounding_box();
    if let Some(&c) = hi.iter().find(|&&c| c > MAX_COORD) {
        return Err(Error::TooLarge {
            what: "support coordinate",
            limit: MAX_COORD as usize,
            found: c as usize,
        });
    }
    let box_size = lo
        .iter()
        .zip(&hi)
        .try_fold(1usize, |acc, (l, h)| acc.checked_mul((h - l + 1) as usize))
        .filter(|&n| n <= MAX_BOX)
        .ok_or(Error::TooLarge {
            what: "bounding box",
            limit: MAX_BOX,
            found: usize::MAX,
        })?;
    let level = s.common_total();
    let mut candidates = Vec::with_capacity(box_size);
    let mut cur = lo.clone();
    loop {
        let z = MultiIndex::new(cur.clone());
        if !s.contains(&z) && level.is_none_or(|d| z.total() == d) {
            candidates.push(z);
        }
        let mut i = 0;
        loop {
            if i == s.dim() {
                break;
            }
            if cur[i] < hi[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = lo[i];
            i += 1;
        }
        if i == s.dim() {
            break;
        }
    }
    candidates.sort();
    let hit = candidates
        .par_iter()
        .map(|z| s.hull_contains(&z.to_rationals()).map(|inside| (z, inside)))
        .find_first(|r| !matches!(r, Ok((_, false))));
    match hit {
        None => Ok(DConvexity::DConvex),
        Some(Ok((z, _))) => Ok(DConvexity::Counterexample { point: z.clone() }),
        Some(Err(e)) => Err(e),
    }
}
