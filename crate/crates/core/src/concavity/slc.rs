//! Sampled falsifier for strong log-concavity: every nonzero mixed partial
//! `q = d^c p` must have a negative semidefinite Hessian of `log q` on the
//! positive orthant.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{MultiIndex, SparsePoly};
use crate::rng;

pub const DEFAULT_SAMPLES: usize = 200;
const MAX_DERIVATIVES: usize = 50_000;
const LOG_RANGE: f64 = 3.0;
const EIGEN_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SlcStatus {
    /// Decided by an exact criterion.
    Certified,
    /// No violation among the sampled points; not a proof.
    SampledPass,
    Refuted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlcWitness {
    pub derivative: MultiIndex,
    pub point: Vec<f64>,
    pub max_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlcVerdict {
    pub status: SlcStatus,
    pub witness: Option<SlcWitness>,
    /// Outcome of the exact criterion when one applies.
    pub exact: Option<bool>,
    pub derivatives_checked: usize,
    pub samples: usize,
    pub seed: u64,
}

/// Every `c` with `d^c p != 0`: the downward closure of the support.
pub(crate) fn nonzero_derivative_orders(p: &SparsePoly) -> Result<Vec<MultiIndex>> {
    let mut seen: BTreeSet<MultiIndex> = p.support().into_iter().collect();
    let mut frontier: Vec<MultiIndex> = seen.iter().cloned().collect();
    while let Some(c) = frontier.pop() {
        for i in 0..c.len() {
            if c.entries()[i] == 0 {
                continue;
            }
            let mut e = c.entries().to_vec();
            e[i] -= 1;
            let d = MultiIndex::new(e);
            if seen.insert(d.clone()) {
                if seen.len() > MAX_DERIVATIVES {
                    return Err(Error::TooLarge {
                        what: "number of mixed derivatives",
                        limit: MAX_DERIVATIVES,
                        found: seen.len(),
                    });
                }
                frontier.push(d);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Hessian of `log q` at `x = e^u`, from the softmax weights of the terms:
/// `H_ij = (Cov(s)_ij - [i = j] E(s_i)) / (x_i x_j)`.
fn log_hessian(terms: &[(Vec<f64>, f64)], u: &[f64]) -> DMatrix<f64> {
    let m = u.len();
    let logs: Vec<f64> = terms
        .iter()
        .map(|(s, lc)| lc + s.iter().zip(u).map(|(a, b)| a * b).sum::<f64>())
        .collect();
    let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut mean = vec![0.0; m];
    for ((s, _), wi) in terms.iter().zip(&w) {
        for i in 0..m {
            mean[i] += wi / total * s[i];
        }
    }
    let mut h = DMatrix::<f64>::zeros(m, m);
    for ((s, _), wi) in terms.iter().zip(&w) {
        let p = wi / total;
        for i in 0..m {
            let di = s[i] - mean[i];
            if di == 0.0 {
                continue;
            }
            for j in 0..m {
                h[(i, j)] += p * di * (s[j] - mean[j]);
            }
        }
    }
    for i in 0..m {
        h[(i, i)] -= mean[i];
    }
    let x: Vec<f64> = u.iter().map(|v| v.exp()).collect();
    DMatrix::from_fn(m, m, |i, j| h[(i, j)] / (x[i] * x[j]))
}

fn max_eigenvalue(h: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(h).eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

fn inf_norm(h: &DMatrix<f64>) -> f64 {
    h.row_iter().map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn check_derivative(p: &SparsePoly, c: &MultiIndex, points: &[Vec<f64>]) -> Result<Option<SlcWitness>> {
    let q = p.partial_derivative(c)?;
    // monomials and positive affine functions have concave logarithms
    if q.len() <= 1 || q.total_degree() <= 1 {
        return Ok(None);
    }
    let terms = q.float_terms();
    for u in points {
        let h = log_hessian(&terms, u);
        let scale = 1.0 + inf_norm(&h);
        let lambda = max_eigenvalue(h);
        if lambda > EIGEN_TOLERANCE * scale {
            return Ok(Some(SlcWitness {
                derivative: c.clone(),
                point: u.iter().map(|v| v.exp()).collect(),
                max_eigenvalue: lambda,
            }));
        }
    }
    Ok(None)
}

/// Samples `samples` points log-uniformly in `[e^-3, e^3]^m` and tests the
/// Hessian of `log d^c p` at each, for every nonzero mixed partial. The
/// reported witness is the first failure in graded-lex order of `c`, then
/// sample order, independent of scheduling.
pub fn slc_sampled(p: &SparsePoly, samples: usize, seed: u64) -> Result<SlcVerdict> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = p.num_vars();
    let mut gen = rng::stream(seed, "slc-samples");
    let points: Vec<Vec<f64>> = (0..samples)
        .map(|_| (0..m).map(|_| gen.gen_range(-LOG_RANGE..=LOG_RANGE)).collect())
        .collect();
    let orders = nonzero_derivative_orders(p)?;
    let found = orders
        .par_iter()
        .map(|c| check_derivative(p, c, &points))
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let witness = match found {
        Some(Err(e)) => return Err(e),
        Some(Ok(w)) => w,
        None => None,
    };
    let exact = super::slc_exact(p)?;
    let status = match (&witness, exact) {
        (Some(_), _) => SlcStatus::Refuted,
        (None, Some(true)) => SlcStatus::Certified,
        _ => SlcStatus::SampledPass,
    };
    Ok(SlcVerdict {
        status,
        witness,
        exact,
        derivatives_checked: orders.len(),
        samples,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{int, rat};

    fn lin(a: &[i64]) -> SparsePoly {
        SparsePoly::linear_form(&a.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let p = lin(&[1, 2]).pow(3).add(&lin(&[3, 1])).unwrap();
        let terms = p.float_terms();
        let u = [0.3, -0.7];
        let h = log_hessian(&terms, &u);
        let f = |x: &[f64]| p.evaluate(x).unwrap().ln();
        let x = [u[0].exp(), u[1].exp()];
        let e = 1e-4;
        for i in 0..2 {
            for j in 0..2 {
                let mut pp = x;
                pp[i] += e;
                pp[j] += e;
                let mut pm = x;
                pm[i] += e;
                pm[j] -= e;
                let mut mp = x;
                mp[i] -= e;
                mp[j] += e;
                let mut mm = x;
                mm[i] -= e;
                mm[j] -= e;
                let fd = (f(&pp) - f(&pm) - f(&mp) + f(&mm)) / (4.0 * e * e);
                assert!((fd - h[(i, j)]).abs() < 1e-5, "{i}{j}: {fd} vs {}", h[(i, j)]);
            }
        }
    }

    #[test]
    fn square_is_certified() {
        let v = slc_sampled(&lin(&[1, 1]).pow(2), 50, 1).unwrap();
        assert_eq!(v.status, SlcStatus::Certified);
        assert_eq!(v.derivatives_checked, 6);
    }

    #[test]
    fn non_log_concave_quartic_is_refuted() {
        // x1 x2 x3 x4 + ((x1 x2)^2 + (x3 x4)^2) / 4
        let p = SparsePoly::from_terms(
            4,
            [
                (MultiIndex::ones(4), int(1)),
                (MultiIndex::new(vec![2, 2, 0, 0]), rat(1, 4)),
                (MultiIndex::new(vec![0, 0, 2, 2]), rat(1, 4)),
            ],
        )
        .unwrap();
        let v = slc_sampled(&p, 200, 3).unwrap();
        assert_eq!(v.status, SlcStatus::Refuted);
        assert!(v.witness.unwrap().max_eigenvalue > 0.0);
    }

    #[test]
    fn deterministic_given_seed() {
        let p = lin(&[1, 1, 0]).multiply(&lin(&[0, 1, 1])).unwrap().add(&lin(&[1, 0, 0]).pow(3)).unwrap();
        assert_eq!(slc_sampled(&p, 100, 9).unwrap(), slc_sampled(&p, 100, 9).unwrap());
    }

    #[test]
    fn derivative_orders_are_downward_closed() {
        let p = SparsePoly::monomial(MultiIndex::new(vec![2, 1]), int(1));
        assert_eq!(nonzero_derivative_orders(&p).unwrap().len(), 6);
    }
}
