//! Polynomials that are H-stable (hence strongly log-concave) by
//! construction, plus a few known non-examples.

use num_traits::One;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{int, rat, Rational};
use crate::permanent::{prod_poly, NonnegMatrix};
use crate::poly::{MultiIndex, SparsePoly};

/// Why a polynomial may be assumed strongly log-concave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Built by an operation that preserves H-stability; the string names it.
    Constructive(String),
    /// Supplied from outside; nothing is known.
    User,
}

impl Provenance {
    pub fn is_constructive(&self) -> bool {
        matches!(self, Provenance::Constructive(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fixture {
    pub name: String,
    pub poly: SparsePoly,
    pub provenance: Provenance,
}

impl Fixture {
    fn constructive(name: &str, poly: SparsePoly, how: &str) -> Self {
        Fixture {
            name: name.into(),
            poly,
            provenance: Provenance::Constructive(how.into()),
        }
    }
}

/// `prod_k <a_k, x>`.
pub fn linear_form_product(forms: &[Vec<Rational>]) -> Result<SparsePoly> {
    let m = forms
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("need at least one linear form".into()))?;
    let polys = forms
        .iter()
        .map(|a| {
            if a.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: a.len(),
                });
            }
            SparsePoly::linear_form(a)
        })
        .collect::<Result<Vec<_>>>()?;
    if polys.iter().any(SparsePoly::is_zero) {
        return Err(Error::InvalidArgument("linear forms must be nonzero".into()));
    }
    SparsePoly::product(m, polys.iter())
}

pub fn power_of_linear_form(a: &[Rational], k: u32) -> Result<SparsePoly> {
    Ok(SparsePoly::linear_form(a)?.pow(k))
}

/// `(x_1 + x_2)(x_2 + x_3) ... (x_{2n-1} + x_{2n})(x_{2n} + x_1)` in `2n` variables.
pub fn cycle_polynomial(n: usize) -> Result<SparsePoly> {
    if n == 0 {
        return Err(Error::InvalidArgument("cycle length must be positive".into()));
    }
    let m = 2 * n;
    let forms: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let mut a = vec![int(0); m];
            a[i] = int(1);
            a[(i + 1) % m] = int(1);
            a
        })
        .collect();
    linear_form_product(&forms)
}

/// `e_k(x_1, ..., x_m)`.
pub fn elementary_symmetric(m: usize, k: usize) -> Result<SparsePoly> {
    if k > m {
        return Err(Error::InvalidArgument(format!("e_{k} needs at least {k} variables")));
    }
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<u32>, out: &mut Vec<(MultiIndex, Rational)>) {
        if k == 0 {
            out.push((MultiIndex::new(cur.clone()), Rational::one()));
            return;
        }
        for i in start..=m - k {
            cur[i] = 1;
            rec(m, k - 1, i + 1, cur, out);
            cur[i] = 0;
        }
    }
    let mut terms = Vec::new();
    rec(m, k, 0, &mut vec![0; m], &mut terms);
    SparsePoly::from_terms(m, terms)
}

/// Product of `n` linear forms in `m` variables with coefficients drawn
/// uniformly from `{1, ..., max_coef}`.
pub fn random_linear_product<R: Rng>(rng: &mut R, m: usize, n: usize, max_coef: u32) -> Result<SparsePoly> {
    let forms: Vec<Vec<Rational>> = (0..n)
        .map(|_| (0..m).map(|_| int(rng.gen_range(1..=max_coef) as i64)).collect())
        .collect();
    linear_form_product(&forms)
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn circulant_regular(n: usize, k: usize) -> NonnegMatrix {
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if (j + n - i) % n < k { rat(1, k as i64) } else { int(0) })
                .collect()
        })
        .collect();
    NonnegMatrix::new(rows).expect("valid circulant")
}

/// The shipped catalog, in a fixed order.
pub fn hstable_fixtures() -> Vec<Fixture> {
    const LINEAR: &str = "product of nonnegative linear forms";
    const POWER: &str = "power of a nonnegative linear form";
    let build = || -> Result<Vec<Fixture>> {
        Ok(vec![
            Fixture::constructive("monomial-x1x2", SparsePoly::monomial(MultiIndex::ones(2), int(1)), LINEAR),
            Fixture::constructive("sum-squared", power_of_linear_form(&ints(&[1, 1]), 2)?, POWER),
            Fixture::constructive("weighted-cube", power_of_linear_form(&ints(&[1, 2]), 3)?, POWER),
            Fixture::constructive("sum-cubed-3", power_of_linear_form(&ints(&[1, 1, 1]), 3)?, POWER),
            Fixture::constructive("sum-fourth-4", power_of_linear_form(&ints(&[1, 1, 1, 1]), 4)?, POWER),
            Fixture::constructive(
                "disjoint-pairs",
                linear_form_product(&[ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1])])?,
                LINEAR,
            ),
            Fixture::constructive(
                "mixed-binary-cubic",
                linear_form_product(&[ints(&[1, 1]), ints(&[1, 3]), ints(&[2, 1])])?,
                LINEAR,
            ),
            Fixture::constructive("cycle-2", cycle_polynomial(2)?, LINEAR),
            Fixture::constructive("cycle-3", cycle_polynomial(3)?, LINEAR),
            Fixture::constructive("row-product-identity-3", prod_poly(&NonnegMatrix::identity(3))?, LINEAR),
            Fixture::constructive(
                "row-product-positive-3",
                prod_poly(&NonnegMatrix::new(vec![ints(&[1, 2, 1]), ints(&[1, 1, 3]), ints(&[2, 1, 1])])?)?,
                LINEAR,
            ),
            Fixture::constructive(
                "row-product-3-regular-6",
                prod_poly(&circulant_regular(6, 3))?,
                LINEAR,
            ),
            Fixture::constructive(
                "elementary-symmetric-4-2",
                elementary_symmetric(4, 2)?,
                "elementary symmetric polynomial",
            ),
        ])
    };
    build().expect("catalog construction is infallible")
}

/// Polynomials with nonnegative coefficients that are not strongly
/// log-concave.
pub fn non_slc_examples() -> Vec<Fixture> {
    let xy = SparsePoly::linear_form(&ints(&[1, 1, 0, 0])).expect("valid form");
    let vw = SparsePoly::linear_form(&ints(&[0, 0, 1, 1])).expect("valid form");
    let paired = xy
        .pow(3)
        .multiply(&vw)
        .and_then(|a| a.add(&vw.pow(3).multiply(&xy)?))
        .expect("same dimensions");
    let quartic = SparsePoly::from_terms(
        4,
        [
            (MultiIndex::ones(4), int(1)),
            (MultiIndex::new(vec![2, 2, 0, 0]), rat(1, 4)),
            (MultiIndex::new(vec![0, 0, 2, 2]), rat(1, 4)),
        ],
    )
    .expect("valid terms");
    vec![
        Fixture {
            name: "paired-cubes".into(),
            poly: paired,
            provenance: Provenance::User,
        },
        Fixture {
            name: "quartic-not-log-concave".into(),
            poly: quartic,
            provenance: Provenance::User,
        },
    ]
}
