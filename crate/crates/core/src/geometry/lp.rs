//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Solves `max c^T x  s.t.  A x = b, x >= 0`. Sizes here are desk scale (a
//! handful of rows, up to a few thousand columns), so the tableau is kept
//! dense and reduced costs are recomputed every pivot.

use num_traits::{One, Signed, Zero};

use crate::numeric::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v *= &inv;
        }
        self.rhs[r] *= &inv;
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over the columns marked in `allowed`. Returns false
    /// if unbounded.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let z: Rational = self
                    .basis
                    .iter()
                    .zip(&self.rows)
                    .filter(|(&b, row)| !cost[b].is_zero() && !row[j].is_zero())
                    .map(|(&b, row)| &cost[b] * &row[j])
                    .fold(Rational::zero(), |acc, v| acc + v);
                if (&cost[j] - z).is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][c];
                let better = match &leaving {
                    None => true,
                    Some((li, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

pub(crate) fn solve(a: &[Vec<Rational>], b: &[Rational], cost: &[Rational]) -> LpOutcome {
    let k = a.len();
    let n = cost.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    let ncols = n + k;
    let mut rows = Vec::with_capacity(k);
    let mut rhs = Vec::with_capacity(k);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        r.extend((0..k).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        rows.push(r);
        rhs.push(if flip { -bi.clone() } else { bi.clone() });
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..ncols).collect(),
        ncols,
    };

    let mut phase1 = vec![Rational::zero(); ncols];
    for c in phase1.iter_mut().skip(n) {
        *c = -Rational::one();
    }
    let all = vec![true; ncols];
    t.optimize(&phase1, &all);
    let infeasibility: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bcol, _)| bcol >= n)
        .map(|(_, v)| v.clone())
        .fold(Rational::zero(), |acc, v| acc + v);
    if infeasibility.is_positive() {
        return LpOutcome::Infeasible;
    }
    // drive zero-valued artificials out of the basis where possible
    for r in 0..k {
        if t.basis[r] < n {
            continue;
        }
        if let Some(c) = (0..n).find(|&c| !t.rows[r][c].is_zero() && !t.basis.contains(&c)) {
            t.pivot(r, c);
        }
    }

    let mut full_cost = cost.to_vec();
    full_cost.extend((0..k).map(|_| Rational::zero()));
    let allowed: Vec<bool> = (0..ncols).map(|j| j < n).collect();
    if !t.optimize(&full_cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (&bcol, v) in t.basis.iter().zip(&t.rhs) {
        if bcol < n {
            x[bcol] = v.clone();
        }
    }
    let value = x
        .iter()
        .zip(cost)
        .map(|(xi, ci)| xi * ci)
        .fold(Rational::zero(), |acc, v| acc + v);
    LpOutcome::Optimal { x, value }
}
