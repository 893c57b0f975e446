//! Sparse multivariate polynomials with exact nonnegative rational
//! coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! graded-lexicographic, so iteration (and everything serialized from it) is
//! deterministic. Zero coefficients are never stored; the zero polynomial is
//! the empty map.

mod construct;
mod json;

pub use construct::{correlator, homogenize, inner_product, reflected_product};
pub use json::{PolyJson, TermJson};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{factorial, format_rational, ln_rational, to_f64, CompensatedSum, Rational};

/// Exponent vector `(r_1, ..., r_m)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(m: usize) -> Self {
        MultiIndex(vec![0; m])
    }

    pub fn ones(m: usize) -> Self {
        MultiIndex(vec![1; m])
    }

    pub fn unit(m: usize, i: usize, k: u32) -> Self {
        let mut e = vec![0; m];
        e[i] = k;
        MultiIndex(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    /// `|R|_1`.
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self - other`, or `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// `prod r_i!`.
    pub fn factorial_product(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &r| acc * factorial(r))
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        self.0.iter().map(|&r| Rational::from_integer(r.into())).collect()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Polynomial in `num_vars` variables with positive rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    num_vars: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl SparsePoly {
    pub fn zero(num_vars: usize) -> Self {
        SparsePoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Result<Self> {
        Self::from_terms(num_vars, [(MultiIndex::zeros(num_vars), c)])
    }

    pub fn one(num_vars: usize) -> Self {
        Self::monomial(MultiIndex::zeros(num_vars), Rational::one())
    }

    /// `c * x^R`. A zero `c` gives the zero polynomial.
    pub fn monomial(index: MultiIndex, c: Rational) -> Self {
        let mut p = SparsePoly::zero(index.len());
        if !c.is_zero() {
            p.terms.insert(index, c);
        }
        p
    }

    pub fn variable(num_vars: usize, i: usize) -> Self {
        Self::monomial(MultiIndex::unit(num_vars, i, 1), Rational::one())
    }

    /// `sum_i a_i x_i`.
    pub fn linear_form(coeffs: &[Rational]) -> Result<Self> {
        let m = coeffs.len();
        Self::from_terms(
            m,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| (MultiIndex::unit(m, i, 1), a.clone())),
        )
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed; zero coefficients are dropped.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let mut p = SparsePoly::zero(num_vars);
        for (idx, c) in terms {
            if idx.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: idx.len(),
                });
            }
            if c.is_negative() {
                return Err(Error::NegativeCoefficient(format_rational(&c)));
            }
            if c.is_zero() {
                continue;
            }
            *p.terms.entry(idx).or_insert_with(Rational::zero) += c;
        }
        Ok(p)
    }

    /// Univariate polynomial from its coefficient list `a_0, a_1, ...`.
    pub fn univariate(coeffs: &[Rational]) -> Result<Self> {
        Self::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| (MultiIndex::new(vec![i as u32]), a.clone())),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> Rational {
        self.terms.get(index).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> Vec<MultiIndex> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(MultiIndex::total).max().unwrap_or(0)
    }

    /// Common total degree of all terms, if there is one. The zero polynomial
    /// has none.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(MultiIndex::total);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// Largest exponent of each variable (`deg_p(i)`).
    pub fn variable_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.num_vars];
        for idx in self.terms.keys() {
            for (o, &r) in out.iter_mut().zip(idx.entries()) {
                *o = (*o).max(r);
            }
        }
        out
    }

    fn check_dims(&self, found: usize) -> Result<()> {
        if found != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_dims(other.num_vars)?;
        let mut out = self.clone();
        for (idx, c) in &other.terms {
            *out.terms.entry(idx.clone()).or_insert_with(Rational::zero) += c;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Result<SparsePoly> {
        if c.is_negative() {
            return Err(Error::NegativeCoefficient(format_rational(c)));
        }
        if c.is_zero() {
            return Ok(SparsePoly::zero(self.num_vars));
        }
        Ok(SparsePoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        })
    }

    pub fn multiply(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_dims(other.num_vars)?;
        let mut terms: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *terms.entry(a.add(b)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        Ok(SparsePoly {
            num_vars: self.num_vars,
            terms,
        })
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.num_vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.multiply(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.multiply(&base).expect("same dimension");
            }
        }
        acc
    }

    /// `prod_i factors_i`; the empty product is `1`.
    pub fn product<'a, I>(num_vars: usize, factors: I) -> Result<SparsePoly>
    where
        I: IntoIterator<Item = &'a SparsePoly>,
    {
        factors
            .into_iter()
            .try_fold(SparsePoly::one(num_vars), |acc, f| acc.multiply(f))
    }

    /// `(d/dx_1)^{c_1} ... (d/dx_m)^{c_m} p`, exact.
    pub fn partial_derivative(&self, c: &MultiIndex) -> Result<SparsePoly> {
        self.check_dims(c.len())?;
        let mut terms = BTreeMap::new();
        for (idx, coef) in &self.terms {
            let Some(rest) = idx.checked_sub(c) else {
                continue;
            };
            // falling factorials r!/(r-c)!
            let factor = idx.factorial_product() / rest.factorial_product();
            terms.insert(rest, coef * Rational::from_integer(factor));
        }
        Ok(SparsePoly {
            num_vars: self.num_vars,
            terms,
        })
    }

    /// `Der_p(R) = a_R * prod r_i!`, the mixed derivative at the origin.
    pub fn der_at_zero(&self, r: &MultiIndex) -> Result<Rational> {
        self.check_dims(r.len())?;
        Ok(self.coefficient(r) * Rational::from_integer(r.factorial_product()))
    }

    /// Substitutes `x_i = 0` for every `i` with `mask[i]` set.
    pub fn set_to_zero(&self, mask: &[bool]) -> Result<SparsePoly> {
        self.check_dims(mask.len())?;
        Ok(SparsePoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(idx, _)| idx.entries().iter().zip(mask).all(|(&r, &z)| !z || r == 0))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        })
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter_terms<F>(&self, mut keep: F) -> SparsePoly
    where
        F: FnMut(&MultiIndex) -> bool,
    {
        SparsePoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(idx, _)| keep(idx))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Value at a strictly positive point, summed with compensation.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.check_dims(x.len())?;
        if let Some((index, &value)) = x.iter().enumerate().find(|(_, v)| v.is_nan() || **v <= 0.0) {
            return Err(Error::NonPositivePoint { index, value });
        }
        let sum: CompensatedSum = self
            .terms
            .iter()
            .map(|(idx, c)| {
                idx.entries()
                    .iter()
                    .zip(x)
                    .fold(to_f64(c), |acc, (&r, &xi)| acc * xi.powi(r as i32))
            })
            .collect();
        Ok(sum.value())
    }

    /// `log p(e^{y_1}, ..., e^{y_m})` as a max-shifted log-sum-exp.
    pub fn log_evaluate(&self, y: &[f64]) -> Result<f64> {
        self.check_dims(y.len())?;
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let exponents: Vec<f64> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                ln_rational(c)
                    + idx
                        .entries()
                        .iter()
                        .zip(y)
                        .map(|(&r, &yi)| r as f64 * yi)
                        .sum::<f64>()
            })
            .collect();
        Ok(log_sum_exp(&exponents))
    }

    /// The polynomial in `|R|_1` variables obtained by replacing `x_i` with
    /// the sum of its own block of `r_i` fresh variables (variables with
    /// `r_i = 0` are set to zero). Mixed derivatives satisfy
    /// `Der_p(R) = Der_{split}(1, ..., 1)`.
    pub fn split_variables(&self, r: &MultiIndex) -> Result<SparsePoly> {
        self.check_dims(r.len())?;
        let total = r.total() as usize;
        if total == 0 {
            return Err(Error::InvalidArgument(
                "variable splitting needs a nonzero multi-index".into(),
            ));
        }
        // block sums y_{start} + ... + y_{start + r_i - 1}
        let mut offset = 0usize;
        let mut blocks = Vec::with_capacity(self.num_vars);
        for &ri in r.entries() {
            let mut form = SparsePoly::zero(total);
            for j in offset..offset + ri as usize {
                form = form.add(&SparsePoly::variable(total, j))?;
            }
            offset += ri as usize;
            blocks.push(form);
        }
        let mut power_cache: BTreeMap<(usize, u32), SparsePoly> = BTreeMap::new();
        let mut out = SparsePoly::zero(total);
        for (idx, c) in &self.terms {
            if idx
                .entries()
                .iter()
                .zip(r.entries())
                .any(|(&s, &ri)| ri == 0 && s > 0)
            {
                continue;
            }
            let mut term = SparsePoly::constant(total, c.clone())?;
            for (i, &s) in idx.entries().iter().enumerate() {
                if s == 0 {
                    continue;
                }
                let power = power_cache
                    .entry((i, s))
                    .or_insert_with(|| blocks[i].pow(s));
                term = term.multiply(power)?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Float coefficients and exponents, the view the optimizers work with.
    pub fn float_terms(&self) -> Vec<(Vec<f64>, f64)> {
        self.terms
            .iter()
            .map(|(idx, c)| {
                (
                    idx.entries().iter().map(|&r| r as f64).collect(),
                    ln_rational(c),
                )
            })
            .collect()
    }
}

pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let s: CompensatedSum = values.iter().map(|v| (v - max).exp()).collect();
    max + s.value().ln()
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", format_rational(c))?;
            for (i, &r) in idx.entries().iter().enumerate() {
                match r {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, r)?,
                }
            }
        }
        Ok(())
    }
}
