use std::collections::BTreeMap;

use num_traits::Zero;

use super::{MultiIndex, SparsePoly};
use crate::error::{Error, Result};
use crate::numeric::Rational;

/// `y^n r(x/y)` for a univariate `r`, as a bivariate form of degree `n`.
pub fn homogenize(r: &SparsePoly, n: u32) -> Result<SparsePoly> {
    if r.num_vars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: r.num_vars(),
        });
    }
    let degree = r.total_degree();
    if n < degree {
        return Err(Error::DegreeTooSmall {
            requested: n,
            degree,
        });
    }
    SparsePoly::from_terms(
        2,
        r.terms().map(|(idx, c)| {
            let i = idx.entries()[0];
            (MultiIndex::new(vec![i, n - i]), c.clone())
        }),
    )
}

fn common_degree(p: &SparsePoly, q: &SparsePoly) -> Result<u32> {
    if p.num_vars() != q.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.num_vars(),
            found: q.num_vars(),
        });
    }
    let dp = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let dq = q.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if dp != dq {
        return Err(Error::DegreeMismatch {
            left: dp,
            right: dq,
        });
    }
    Ok(dp)
}

/// `<p, q> = sum_R a_R b_R` for homogeneous `p, q` of equal degree.
pub fn inner_product(p: &SparsePoly, q: &SparsePoly) -> Result<Rational> {
    common_degree(p, q)?;
    Ok(p.terms()
        .filter_map(|(idx, a)| q.terms.get(idx).map(|b| a * b))
        .fold(Rational::zero(), |acc, v| acc + v))
}

/// `prod_i x_i^shift * p(x) * q(1/x)`. Every variable degree of `q` must be at
/// most `shift` so that the result is a polynomial.
pub fn reflected_product(p: &SparsePoly, q: &SparsePoly, shift: u32) -> Result<SparsePoly> {
    if p.num_vars() != q.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.num_vars(),
            found: q.num_vars(),
        });
    }
    if let Some(&d) = q.variable_degrees().iter().find(|&&d| d > shift) {
        return Err(Error::DegreeTooSmall {
            requested: shift,
            degree: d,
        });
    }
    let mut terms: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
    for (a, ca) in p.terms() {
        for (b, cb) in q.terms() {
            let e: Vec<u32> = a
                .entries()
                .iter()
                .zip(b.entries())
                .map(|(&ai, &bi)| ai + shift - bi)
                .collect();
            *terms
                .entry(MultiIndex::new(e))
                .or_insert_with(Rational::zero) += ca * cb;
        }
    }
    Ok(SparsePoly {
        num_vars: p.num_vars(),
        terms,
    })
}

/// `F = prod_i x_i^n p(x) q(1/x)` for `p, q` homogeneous of degree `n`. The
/// coefficient of `x^(n,...,n)` in `F` is `<p, q>`.
pub fn correlator(p: &SparsePoly, q: &SparsePoly) -> Result<SparsePoly> {
    let n = common_degree(p, q)?;
    reflected_product(p, q, n)
}
