//! Log-concave sequences, Newton-type coefficient checks, real-rootedness
//! and strong log-concavity of polynomials.
//!
//! Sequences with zeros follow one convention everywhere: leading and
//! trailing zeros are allowed, a zero strictly between two positive entries
//! makes the sequence not log-concave.

mod fixtures;
mod slc;
mod sturm;

pub use fixtures::{
    cycle_polynomial, elementary_symmetric, hstable_fixtures, linear_form_product, non_slc_examples,
    power_of_linear_form, random_linear_product, Fixture, Provenance,
};
pub use slc::{slc_sampled, SlcStatus, SlcVerdict, SlcWitness, DEFAULT_SAMPLES};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{binomial, factorial, Rational};
use crate::poly::{MultiIndex, SparsePoly};
use sturm::UniPoly;

fn contiguous_support<T, F: Fn(&T) -> bool>(d: &[T], positive: F) -> bool {
    let first = d.iter().position(&positive);
    let last = d.iter().rposition(&positive);
    match (first, last) {
        (Some(a), Some(b)) => d[a..=b].iter().all(positive),
        _ => true,
    }
}

/// `d_i^2 >= d_{i-1} d_{i+1}` for every interior `i`, exact.
pub fn lc_member(d: &[Rational]) -> bool {
    if d.iter().any(Signed::is_negative) {
        return false;
    }
    if !contiguous_support(d, Signed::is_positive) {
        return false;
    }
    d.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

/// Float version with relative slack `1e-12` on each inequality.
pub fn lc_member_f64(d: &[f64]) -> bool {
    if d.iter().any(|&v| v < 0.0 || v.is_nan()) {
        return false;
    }
    if !contiguous_support(d, |&v| v > 0.0) {
        return false;
    }
    d.windows(3).all(|w| {
        let lhs = w[1] * w[1];
        let rhs = w[0] * w[2];
        lhs >= rhs - 1e-12 * lhs.max(rhs)
    })
}

/// Coefficients `a_0..a_deg` of a univariate polynomial.
pub fn univariate_coefficients(r: &SparsePoly) -> Result<Vec<Rational>> {
    if r.num_vars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: r.num_vars(),
        });
    }
    let deg = r.total_degree() as usize;
    let mut a = vec![Rational::zero(); deg + 1];
    for (idx, c) in r.terms() {
        a[idx.entries()[0] as usize] = c.clone();
    }
    Ok(a)
}

/// `d_i = a_i / C(n, i)` is log-concave for `0 <= i <= n`.
pub fn n_newton_check(r: &SparsePoly, n: u32) -> Result<bool> {
    let a = univariate_coefficients(r)?;
    let deg = r.total_degree();
    if n < deg {
        return Err(Error::DegreeTooSmall { requested: n, degree: deg });
    }
    let d: Vec<Rational> = (0..=n)
        .map(|i| {
            let ai = a.get(i as usize).cloned().unwrap_or_else(Rational::zero);
            ai / Rational::from_integer(binomial(n, i))
        })
        .collect();
    Ok(lc_member(&d))
}

/// Strong log-concavity of a univariate function from its Taylor
/// coefficients: `G(i) = a_i i!` must be log-concave.
pub fn slc_exact_univariate(coeffs: &[Rational]) -> bool {
    let g: Vec<Rational> = coeffs
        .iter()
        .enumerate()
        .map(|(i, a)| a * Rational::from_integer(factorial(i as u32)))
        .collect();
    lc_member(&g)
}

/// All roots real, by a Sturm count on the square-free part.
pub fn real_rooted_check(r: &SparsePoly) -> Result<bool> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let p = UniPoly::new(univariate_coefficients(r)?);
    let s = p.square_free();
    Ok(s.distinct_real_roots() == s.degree().unwrap_or(0))
}

/// Exact decision for the cases where one exists: univariate polynomials
/// and homogeneous bivariate ones (via their dehomogenization). `None`
/// otherwise.
pub fn slc_exact(p: &SparsePoly) -> Result<Option<bool>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    match p.num_vars() {
        1 => Ok(Some(slc_exact_univariate(&univariate_coefficients(p)?))),
        2 => match p.homogeneous_degree() {
            Some(n) => {
                let terms = p
                    .terms()
                    .map(|(idx, c)| (MultiIndex::new(vec![idx.entries()[0]]), c.clone()));
                let r = SparsePoly::from_terms(1, terms)?;
                Ok(Some(n_newton_check(&r, n)?))
            }
            None => Ok(None),
        },
        _ => Ok(None),
    }
}
