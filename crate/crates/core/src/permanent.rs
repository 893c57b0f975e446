//! Permanents of nonnegative matrices, the row-product polynomial
//! `Prod_A(x) = prod_i sum_j A(i,j) x_j` whose all-ones mixed derivative is
//! `per(A)`, and Sinkhorn scaling to doubly stochastic form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::capacity;
use crate::error::{Error, Result};
use crate::inequalities::{digest, BoundReport};
use crate::numeric::{format_rational, from_f64, parse_rational, to_f64, vdw, CompensatedSum, Rational};
use crate::poly::{MultiIndex, SparsePoly};

pub const MAX_EXACT_RYSER: usize = 14;
pub const MAX_FLOAT_RYSER: usize = 20;

/// Square matrix with nonnegative rational entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegMatrix {
    rows: Vec<Vec<Rational>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<Value>>,
}

impl NonnegMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix must be nonempty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        if let Some(v) = rows.iter().flatten().find(|v| v.is_negative()) {
            return Err(Error::NegativeCoefficient(format_rational(v)));
        }
        Ok(NonnegMatrix { rows })
    }

    pub fn from_f64(rows: &[Vec<f64>]) -> Result<Self> {
        let exact = rows
            .iter()
            .map(|r| r.iter().map(|&v| from_f64(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        NonnegMatrix::new(exact)
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        NonnegMatrix { rows }
    }

    /// `J_n / n`.
    pub fn uniform(n: usize) -> Self {
        let v = Rational::new(BigInt::one(), BigInt::from(n));
        NonnegMatrix {
            rows: vec![vec![v; n]; n],
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let rows = raw
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Value::String(s) => parse_rational(s),
                        Value::Number(x) => parse_rational(&x.to_string()),
                        other => Err(Error::Parse(format!("matrix entry must be a string or number, got {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != raw.n {
            return Err(Error::DimensionMismatch {
                expected: raw.n,
                found: rows.len(),
            });
        }
        NonnegMatrix::new(rows)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(to_f64).collect()).collect()
    }

    pub fn zero_row(&self) -> Option<usize> {
        self.rows.iter().position(|r| r.iter().all(Zero::is_zero))
    }

    /// Largest deviation of a row or column sum from 1.
    pub fn stochastic_deviation(&self) -> f64 {
        let n = self.n();
        let rows = self.rows.iter().map(|r| r.iter().sum::<Rational>());
        let cols = (0..n).map(|j| self.rows.iter().map(|r| &r[j]).sum::<Rational>());
        rows.chain(cols)
            .map(|s| to_f64(&(s - Rational::one())).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.stochastic_deviation() <= tol
    }

    fn positive_pattern(&self) -> Vec<Vec<bool>> {
        self.rows.iter().map(|r| r.iter().map(|v| v.is_positive()).collect()).collect()
    }
}

impl Serialize for NonnegMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| Value::String(format_rational(v))).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// Gray-code order: the bit flipped at step `k` (1-based) and whether it is
/// switched on.
fn gray_step(k: u64) -> (usize, bool) {
    let bit = k.trailing_zeros() as usize;
    let gray = k ^ (k >> 1);
    (bit, gray >> bit & 1 == 1)
}

/// Exact permanent by Ryser's formula. Rows are cleared to integers first so
/// the inner loop runs on big integers.
pub fn ryser_permanent(a: &NonnegMatrix) -> Result<Rational> {
    let n = a.n();
    if n > MAX_EXACT_RYSER {
        return Err(Error::TooLarge {
            what: "matrix size for exact permanent",
            limit: MAX_EXACT_RYSER,
            found: n,
        });
    }
    let mut denominators = BigInt::one();
    let int_rows: Vec<Vec<BigInt>> = a
        .rows
        .iter()
        .map(|r| {
            let d = r.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            denominators *= &d;
            r.iter().map(|v| v.numer() * (&d / v.denom())).collect()
        })
        .collect();
    let mut row_sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    for k in 1..(1u64 << n) {
        let (j, on) = gray_step(k);
        for (s, row) in row_sums.iter_mut().zip(&int_rows) {
            if on {
                *s += &row[j];
            } else {
                *s -= &row[j];
            }
        }
        let size = (k ^ (k >> 1)).count_ones() as usize;
        let prod = row_sums.iter().fold(BigInt::one(), |acc, s| acc * s);
        if (n - size).is_multiple_of(2) {
            total += prod;
        } else {
            total -= prod;
        }
    }
    Ok(Rational::new(total, denominators))
}

/// Ryser's formula in floating point with compensated accumulation.
pub fn ryser_permanent_f64(a: &[Vec<f64>]) -> Result<f64> {
    let n = a.len();
    if n > MAX_FLOAT_RYSER {
        return Err(Error::TooLarge {
            what: "matrix size for float permanent",
            limit: MAX_FLOAT_RYSER,
            found: n,
        });
    }
    if let Some(bad) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let mut row_sums = vec![0.0; n];
    let mut total = CompensatedSum::default();
    for k in 1..(1u64 << n) {
        let (j, on) = gray_step(k);
        for (s, row) in row_sums.iter_mut().zip(a) {
            if on {
                *s += row[j];
            } else {
                *s -= row[j];
            }
        }
        let size = (k ^ (k >> 1)).count_ones() as usize;
        let prod: f64 = row_sums.iter().product();
        total.add(if (n - size).is_multiple_of(2) { prod } else { -prod });
    }
    Ok(total.value())
}

/// `Prod_A(x) = prod_i sum_j A(i,j) x_j`.
///
/// Each row is scaled to integers first so the expansion runs on integer
/// coefficients; the common denominator is divided out once at the end.
pub fn prod_poly(a: &NonnegMatrix) -> Result<SparsePoly> {
    if let Some(i) = a.zero_row() {
        return Err(Error::ZeroRow(i));
    }
    let n = a.n();
    let mut denom = BigInt::one();
    let mut acc: BTreeMap<MultiIndex, BigInt> = BTreeMap::from([(MultiIndex::zeros(n), BigInt::one())]);
    for row in &a.rows {
        let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<(usize, BigInt)> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.numer() * (&l / v.denom())))
            .collect();
        let mut next: BTreeMap<MultiIndex, BigInt> = BTreeMap::new();
        for (idx, c) in &acc {
            for (j, v) in &ints {
                let mut e = idx.entries().to_vec();
                e[*j] += 1;
                *next.entry(MultiIndex::new(e)).or_insert_with(BigInt::zero) += c * v;
            }
        }
        acc = next;
        denom *= l;
    }
    SparsePoly::from_terms(n, acc.into_iter().map(|(idx, c)| (idx, Rational::new(c, denom.clone()))))
}

/// Maximum bipartite matching on a boolean pattern (augmenting paths).
/// Returns the row matched to each column.
fn max_matching(pattern: &[Vec<bool>]) -> Vec<Option<usize>> {
    let n = pattern.len();
    let mut col_owner: Vec<Option<usize>> = vec![None; n];
    fn augment(i: usize, pattern: &[Vec<bool>], seen: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
        for j in 0..pattern[i].len() {
            if !pattern[i][j] || seen[j] {
                continue;
            }
            seen[j] = true;
            if col_owner[j].is_none_or(|k| augment(k, pattern, seen, col_owner)) {
                col_owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        augment(i, pattern, &mut seen, &mut col_owner);
    }
    col_owner
}

fn first_unmatched_row(pattern: &[Vec<bool>]) -> Option<usize> {
    let owners = max_matching(pattern);
    (0..pattern.len()).find(|i| !owners.contains(&Some(*i)))
}

/// Positive entries that lie on at least one perfect matching. Sinkhorn
/// iterates drive every other entry to zero, so they are removed up front.
fn matchable_pattern(pattern: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = pattern.len();
    let mut out = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if !pattern[i][j] {
                continue;
            }
            let minor: Vec<Vec<bool>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| pattern[r][c]).collect())
                .collect();
            out[i][j] = first_unmatched_row(&minor).is_none();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SinkhornResult {
    pub matrix: NonnegMatrix,
    pub row_scaling: Vec<f64>,
    pub col_scaling: Vec<f64>,
    pub iterations: usize,
    pub deviation: f64,
    /// Positive input entries set to zero because no perfect matching uses them.
    pub pruned: Vec<(usize, usize)>,
}

pub const SINKHORN_TOL: f64 = 1e-12;
pub const SINKHORN_MAX_ITER: usize = 100_000;

/// Alternating row and column normalization. The result is returned with
/// exact rational entries equal to the final float iterate.
pub fn sinkhorn(a: &NonnegMatrix, tol: f64, max_iter: usize) -> Result<SinkhornResult> {
    let n = a.n();
    let pattern = a.positive_pattern();
    if let Some(row) = first_unmatched_row(&pattern) {
        return Err(Error::NoPerfectMatching { row });
    }
    let keep = matchable_pattern(&pattern);
    let mut pruned = Vec::new();
    let base: Vec<Vec<f64>> = a
        .to_f64()
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.into_iter()
                .enumerate()
                .map(|(j, v)| {
                    if keep[i][j] {
                        v
                    } else {
                        if pattern[i][j] {
                            pruned.push((i, j));
                        }
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let mut rs = vec![1.0; n];
    let mut cs = vec![1.0; n];
    let scaled = |rs: &[f64], cs: &[f64]| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| rs[i] * base[i][j] * cs[j]).collect()).collect()
    };
    let deviation = |m: &[Vec<f64>]| -> f64 {
        let rows = m.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs());
        let cols = (0..n).map(|j| (m.iter().map(|r| r[j]).sum::<f64>() - 1.0).abs());
        rows.chain(cols).fold(0.0, f64::max)
    };
    let mut iterations = 0;
    let mut m = scaled(&rs, &cs);
    let mut dev = deviation(&m);
    while dev > tol {
        if iterations >= max_iter {
            return Err(Error::NonConvergence {
                iterations,
                gradient_norm: dev,
                objective: f64::NAN,
            });
        }
        iterations += 1;
        for i in 0..n {
            let s: f64 = (0..n).map(|j| base[i][j] * cs[j]).sum();
            rs[i] = 1.0 / s;
        }
        for j in 0..n {
            let s: f64 = (0..n).map(|i| rs[i] * base[i][j]).sum();
            cs[j] = 1.0 / s;
        }
        m = scaled(&rs, &cs);
        dev = deviation(&m);
    }
    Ok(SinkhornResult {
        matrix: NonnegMatrix::from_f64(&m)?,
        row_scaling: rs,
        col_scaling: cs,
        iterations,
        deviation: dev,
        pruned,
    })
}

/// `vdw(n) <= per(A) <= 1` exactly and `Cap(Prod_A) = 1` for a doubly
/// stochastic `A`.
pub fn vdw_bounds_check(a: &NonnegMatrix) -> Result<Vec<BoundReport>> {
    let d = digest(a);
    let n = a.n();
    if !a.is_doubly_stochastic(1e-9) {
        let note = format!("not doubly stochastic (deviation {:e})", a.stochastic_deviation());
        return Ok(vec![BoundReport::not_applicable("permanent-vdw", d, note)]);
    }
    let per = ryser_permanent(a)?;
    let lower = vdw(n as u32);
    let cap = capacity::capacity(&prod_poly(a)?)?;
    let per_f = to_f64(&per);
    Ok(vec![
        BoundReport::compare("permanent-vdw-lower", per_f, to_f64(&lower), d.clone())
            .with_constant("vdw", to_f64(&lower))
            .with_exact(per >= lower),
        BoundReport::compare("permanent-upper", 1.0, per_f, d.clone()).with_exact(per <= Rational::one()),
        BoundReport::compare("prod-capacity-unit", 1e-6, (cap.value - 1.0).abs(), d)
            .with_constant("capacity", cap.value)
            .with_note("left is the allowed deviation of Cap(Prod_A) from 1"),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};
    use crate::poly::MultiIndex;

    fn m(rows: &[&[i64]]) -> NonnegMatrix {
        NonnegMatrix::new(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    /// Permanent by summing over all permutations.
    fn brute(a: &NonnegMatrix) -> Rational {
        fn rec(a: &NonnegMatrix, i: usize, used: &mut Vec<bool>) -> Rational {
            if i == a.n() {
                return Rational::one();
            }
            let mut s = Rational::zero();
            for j in 0..a.n() {
                if !used[j] && !a.get(i, j).is_zero() {
                    used[j] = true;
                    s += a.get(i, j) * rec(a, i + 1, used);
                    used[j] = false;
                }
            }
            s
        }
        rec(a, 0, &mut vec![false; a.n()])
    }

    #[test]
    fn ryser_examples() {
        assert_eq!(ryser_permanent(&NonnegMatrix::identity(3)).unwrap(), int(1));
        assert_eq!(ryser_permanent(&m(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]])).unwrap(), int(6));
        assert_eq!(ryser_permanent(&NonnegMatrix::uniform(3)).unwrap(), rat(2, 9));
        let a = m(&[&[1, 2, 0, 3], &[0, 1, 4, 1], &[2, 2, 1, 0], &[5, 0, 1, 1]]);
        assert_eq!(ryser_permanent(&a).unwrap(), brute(&a));
        let f = ryser_permanent_f64(&a.to_f64()).unwrap();
        assert!((f - to_f64(&brute(&a))).abs() < 1e-9);
    }

    #[test]
    fn prod_poly_derivative_is_permanent() {
        let p = prod_poly(&NonnegMatrix::identity(3)).unwrap();
        assert_eq!(p, SparsePoly::monomial(MultiIndex::ones(3), int(1)));
        let j2 = prod_poly(&NonnegMatrix::uniform(2)).unwrap();
        assert_eq!(j2.der_at_zero(&MultiIndex::ones(2)).unwrap(), rat(1, 2));
        let a = NonnegMatrix::new(vec![
            vec![rat(1, 2), rat(1, 3), int(0)],
            vec![int(2), rat(5, 7), int(1)],
            vec![int(0), rat(1, 4), int(3)],
        ])
        .unwrap();
        assert_eq!(
            prod_poly(&a).unwrap().der_at_zero(&MultiIndex::ones(3)).unwrap(),
            ryser_permanent(&a).unwrap()
        );
        assert_eq!(prod_poly(&m(&[&[1, 0], &[0, 0]])), Err(Error::ZeroRow(1)));
    }

    #[test]
    fn sinkhorn_cases() {
        let ds = sinkhorn(&NonnegMatrix::uniform(3), SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
        assert!(ds.iterations <= 1);
        let tri = sinkhorn(&m(&[&[1, 1], &[0, 1]]), SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
        assert_eq!(tri.pruned, vec![(0, 1)]);
        assert_eq!(tri.matrix, NonnegMatrix::identity(2));
        assert_eq!(
            sinkhorn(&m(&[&[1, 1], &[0, 0]]), SINKHORN_TOL, SINKHORN_MAX_ITER),
            Err(Error::NoPerfectMatching { row: 1 })
        );
        assert!(matches!(
            sinkhorn(&m(&[&[1, 1, 0], &[1, 1, 0], &[1, 1, 0]]), SINKHORN_TOL, SINKHORN_MAX_ITER),
            Err(Error::NoPerfectMatching { .. })
        ));
        let pos = sinkhorn(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]), SINKHORN_TOL, SINKHORN_MAX_ITER).unwrap();
        assert!(pos.deviation <= SINKHORN_TOL);
        assert!(pos.matrix.is_doubly_stochastic(1e-11));
    }

    #[test]
    fn vdw_report_uniform() {
        let reports = vdw_bounds_check(&NonnegMatrix::uniform(4)).unwrap();
        assert!(reports.iter().all(|r| r.holds()));
        // lower bound attained exactly
        assert_eq!(reports[0].slack, 0.0);
        let perm = vdw_bounds_check(&NonnegMatrix::identity(3)).unwrap();
        assert_eq!(perm[1].slack, 0.0);
        let bad = vdw_bounds_check(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(bad[0].verdict, crate::inequalities::Verdict::NotApplicable);
    }

    #[test]
    fn json_roundtrip() {
        let a = NonnegMatrix::from_json_str(r#"{"n":2,"rows":[["1/2","1/2"],[0.25,"3/4"]]}"#).unwrap();
        assert_eq!(a.get(1, 0), &rat(1, 4));
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"n":2,"rows":[["1/2","1/2"],["1/4","3/4"]]}"#);
        assert!(NonnegMatrix::from_json_str(r#"{"n":1,"rows":[["-1"]]}"#).is_err());
    }
}
