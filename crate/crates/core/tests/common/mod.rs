//! Independent oracles shared by the integration tests. None of these call
//! into the solver or LP code they are used to check.
#![allow(dead_code)]

use logcap_core::numeric::{int, to_f64};
use logcap_core::{MultiIndex, Rational, SparsePoly};
use num_traits::{One, Signed, Zero};
use rand::Rng;

/// Random polynomial with `terms` distinct monomials of per-variable degree
/// at most `max_exp` and integer coefficients in `1..=9`.
pub fn random_poly<R: Rng>(rng: &mut R, m: usize, terms: usize, max_exp: u32) -> SparsePoly {
    let mut out = Vec::new();
    for _ in 0..terms {
        let e: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=max_exp)).collect();
        out.push((MultiIndex::new(e), int(rng.gen_range(1..=9))));
    }
    SparsePoly::from_terms(m, out).expect("valid terms")
}

fn log_objective(terms: &[(Vec<f64>, f64)], r: &[f64], offset: f64, y: &[f64]) -> f64 {
    let vals: Vec<f64> = terms
        .iter()
        .map(|(e, lc)| lc + e.iter().zip(r).zip(y).map(|((s, ri), yi)| (s - ri) * yi).sum::<f64>())
        .collect();
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + vals.iter().map(|v| (v - max).exp()).sum::<f64>().ln() + offset
}

fn grid_points(center: &[f64], half: f64, step: f64) -> Vec<Vec<f64>> {
    let k = (half / step).round() as i64;
    let mut pts = vec![Vec::new()];
    for &c in center {
        let mut next = Vec::new();
        for p in &pts {
            for i in -k..=k {
                let mut q = p.clone();
                q.push(c + i as f64 * step);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

/// `C_p(R)` by brute-force search over log coordinates: a unit grid on
/// `[-40, 40]^m`, then four refinements by a factor of ten around the best
/// point. Only meant for `m <= 3`.
pub fn grid_capacity(p: &SparsePoly, r: &MultiIndex) -> f64 {
    let m = p.num_vars();
    let terms: Vec<(Vec<f64>, f64)> = p
        .terms()
        .map(|(e, c)| (e.entries().iter().map(|&v| v as f64).collect(), to_f64(c).ln()))
        .collect();
    let rf: Vec<f64> = r.entries().iter().map(|&v| v as f64).collect();
    let offset: f64 = rf.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum();
    let mut best_y = vec![0.0; m];
    let mut best = f64::INFINITY;
    let mut half = 40.0;
    let mut step = 1.0;
    for _ in 0..5 {
        for y in grid_points(&best_y.clone(), half, step) {
            let v = log_objective(&terms, &rf, offset, &y);
            if v < best {
                best = v;
                best_y = y;
            }
        }
        half = 2.0 * step;
        step /= 10.0;
    }
    best.exp()
}

/// Exact solution of a small linear system by Gauss-Jordan elimination:
/// `Some(x)` when the solution is unique, `None` when inconsistent or
/// underdetermined.
pub fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        let inv = a[row][col].recip();
        for v in a[row].iter_mut() {
            *v = &*v * &inv;
        }
        b[row] = &b[row] * &inv;
        let pivot = a[row].clone();
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
                let d = &f * &b[row];
                b[i] -= d;
            }
        }
        pivots.push(col);
        row += 1;
    }
    if b[row..].iter().any(|v| !v.is_zero()) || pivots.len() < cols {
        return None;
    }
    Some(b[..cols].to_vec())
}

/// Hull membership by Caratheodory: `z` is in `Conv(S)` iff it is a convex
/// combination of some affinely independent subset of at most `m + 1` points.
pub fn caratheodory_contains(points: &[MultiIndex], z: &[Rational]) -> bool {
    let m = z.len();
    let n = points.len();
    let max_k = (m + 1).min(n);
    let mut subset = Vec::new();
    fn rec(points: &[MultiIndex], z: &[Rational], start: usize, left: usize, subset: &mut Vec<usize>) -> bool {
        if !subset.is_empty() {
            let m = z.len();
            let mut a = vec![vec![Rational::zero(); subset.len()]; m + 1];
            for (j, &i) in subset.iter().enumerate() {
                for (row, &v) in points[i].entries().iter().enumerate() {
                    a[row][j] = Rational::from_integer(v.into());
                }
                a[m][j] = Rational::one();
            }
            let mut b: Vec<Rational> = z.to_vec();
            b.push(Rational::one());
            if let Some(x) = solve_exact(a, b) {
                if x.iter().all(|v| !v.is_negative()) {
                    return true;
                }
            }
        }
        if left == 0 {
            return false;
        }
        for i in start..points.len() {
            subset.push(i);
            if rec(points, z, i + 1, left - 1, subset) {
                return true;
            }
            subset.pop();
        }
        false
    }
    rec(points, z, 0, max_k, &mut subset)
}

/// Permanent as a sum over all permutations.
pub fn brute_permanent(a: &[Vec<Rational>]) -> Rational {
    fn rec(a: &[Vec<Rational>], i: usize, used: &mut [bool]) -> Rational {
        if i == a.len() {
            return Rational::one();
        }
        let mut s = Rational::zero();
        for j in 0..a.len() {
            if !used[j] && !a[i][j].is_zero() {
                used[j] = true;
                s += &a[i][j] * rec(a, i + 1, used);
                used[j] = false;
            }
        }
        s
    }
    rec(a, 0, &mut vec![false; a.len()])
}

/// Coefficient list of a univariate polynomial, evaluated exactly by Horner.
pub fn horner(coeffs: &[Rational], t: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// `prod (t + a_k)` as a coefficient list.
pub fn real_rooted(roots: &[Rational]) -> Vec<Rational> {
    let mut c = vec![Rational::one()];
    for a in roots {
        let mut next = vec![Rational::zero(); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i] += ci * a;
            next[i + 1] += ci;
        }
        c = next;
    }
    c
}
