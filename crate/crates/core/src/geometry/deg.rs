use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{MultiIndex, SparsePoly};

const MAX_VARS: usize = 12;

/// `Deg_p(S)` for every subset `S` of the variables, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegFunction {
    m: usize,
    values: Vec<u32>,
}

impl DegFunction {
    pub fn of(p: &SparsePoly) -> Result<Self> {
        let m = p.num_vars();
        if m > MAX_VARS {
            return Err(Error::TooLarge {
                what: "variable count",
                limit: MAX_VARS,
                found: m,
            });
        }
        let values = (0..1u32 << m).map(|mask| deg_subset(p, mask)).collect();
        Ok(DegFunction { m, values })
    }

    /// Wraps an explicit table; `values.len()` must be `2^m`.
    pub fn from_values(m: usize, values: Vec<u32>) -> Result<Self> {
        if m > MAX_VARS {
            return Err(Error::TooLarge {
                what: "variable count",
                limit: MAX_VARS,
                found: m,
            });
        }
        if values.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: values.len(),
            });
        }
        Ok(DegFunction { m, values })
    }

    pub fn num_vars(&self) -> usize {
        self.m
    }

    pub fn get(&self, mask: u32) -> u32 {
        self.values[mask as usize]
    }
}

/// Maximum over the support of `sum_{j in S} r_j`, with `S` given as a
/// bitmask over variable indices.
pub fn deg_subset(p: &SparsePoly, mask: u32) -> u32 {
    p.terms()
        .map(|(idx, _)| masked_sum(idx, mask))
        .max()
        .unwrap_or(0)
}

fn masked_sum(idx: &MultiIndex, mask: u32) -> u32 {
    idx.entries()
        .iter()
        .enumerate()
        .filter(|(j, _)| mask >> j & 1 == 1)
        .map(|(_, &r)| r)
        .sum()
}

pub(crate) fn mask_to_vars(mask: u32) -> Vec<usize> {
    (0..32).filter(|j| mask >> j & 1 == 1).collect()
}

/// All `R in Z_+^m` with `|R|_1 = n`, graded-lex ascending.
pub fn compositions(m: usize, n: u32) -> Vec<MultiIndex> {
    fn rec(m: usize, n: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == m {
            prefix.push(n);
            out.push(MultiIndex::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            rec(m, n - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    rec(m, n, &mut Vec::with_capacity(m), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadoViolation {
    pub exponent: MultiIndex,
    pub in_support: bool,
    /// For an exponent outside the support that nonetheless satisfies every
    /// subset bound this is empty; otherwise the first violated subset.
    pub subset: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RadoReport {
    pub degree: u32,
    pub checked: usize,
    pub holds: bool,
    pub violations: Vec<RadoViolation>,
}

/// Compares the support of a homogeneous `p` with the set of `R`, `|R| = n`,
/// obeying `sum_{j in S} r_j <= Deg_p(S)` for every subset `S`.
pub fn rado_check(p: &SparsePoly) -> Result<RadoReport> {
    let m = p.num_vars();
    if m > MAX_VARS {
        return Err(Error::TooLarge {
            what: "variable count",
            limit: MAX_VARS,
            found: m,
        });
    }
    let n = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let deg = DegFunction::of(p)?;
    let mut violations = Vec::new();
    let candidates = compositions(m, n);
    for r in &candidates {
        let in_support = !num_traits::Zero::is_zero(&p.coefficient(r));
        let broken = (0..1u32 << m).find(|&mask| masked_sum(r, mask) > deg.get(mask));
        match (in_support, broken) {
            (true, Some(mask)) => violations.push(RadoViolation {
                exponent: r.clone(),
                in_support,
                subset: mask_to_vars(mask),
            }),
            (false, None) => violations.push(RadoViolation {
                exponent: r.clone(),
                in_support,
                subset: Vec::new(),
            }),
            _ => {}
        }
    }
    Ok(RadoReport {
        degree: n,
        checked: candidates.len(),
        holds: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmodularityViolation {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubmodularityReport {
    pub submodular: bool,
    /// Equality in every pair, i.e. the function is modular.
    pub modular: bool,
    pub violations: Vec<SubmodularityViolation>,
}

/// `Deg(S ∪ T) + Deg(S ∩ T) <= Deg(S) + Deg(T)` over all pairs.
pub fn submodularity_check(d: &DegFunction) -> SubmodularityReport {
    let full = 1u32 << d.m;
    let mut violations = Vec::new();
    let mut modular = true;
    for s in 0..full {
        for t in s..full {
            let lhs = d.get(s | t) + d.get(s & t);
            let rhs = d.get(s) + d.get(t);
            if lhs != rhs {
                modular = false;
            }
            if lhs > rhs {
                violations.push(SubmodularityViolation {
                    s: mask_to_vars(s),
                    t: mask_to_vars(t),
                });
            }
        }
    }
    SubmodularityReport {
        submodular: violations.is_empty(),
        modular,
        violations,
    }
}
