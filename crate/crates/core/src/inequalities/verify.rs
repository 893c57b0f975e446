use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use super::constants::{l_product, schrijver_constant, vdw_product};
use super::report::{digest, BoundReport};
use crate::capacity::{self, CapacityResult, CapacityStatus, SolverOptions};
use crate::concavity::Provenance;
use crate::error::{Error, Result};
use crate::exp_linear::ExpLinearFixture;
use crate::numeric::{factorial, format_rational, ln_rational, pow_rational, rat, to_f64, vdw, Rational};
use crate::poly::{inner_product, reflected_product, MultiIndex, SparsePoly};
use crate::rng;

/// The functions the bounds are checked on.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Function {
    Poly(SparsePoly),
    ExpLinear(ExpLinearFixture),
}

impl Function {
    pub fn num_vars(&self) -> usize {
        match self {
            Function::Poly(p) => p.num_vars(),
            Function::ExpLinear(f) => f.num_vars(),
        }
    }

    pub fn der_at_zero(&self, r: &MultiIndex) -> Result<Rational> {
        match self {
            Function::Poly(p) => p.der_at_zero(r),
            Function::ExpLinear(f) => f.der_at_zero(r),
        }
    }

    pub fn c_f(&self, r: &MultiIndex) -> Result<CapacityResult> {
        match self {
            Function::Poly(p) => capacity::c_f_at(p, r),
            Function::ExpLinear(f) => capacity::c_f_exp_linear(f, r),
        }
    }

    pub fn as_poly(&self) -> Option<&SparsePoly> {
        match self {
            Function::Poly(p) => Some(p),
            Function::ExpLinear(_) => None,
        }
    }

    fn check_dims(&self, r: &MultiIndex) -> Result<()> {
        if r.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars(),
                found: r.len(),
            });
        }
        Ok(())
    }
}

impl From<SparsePoly> for Function {
    fn from(p: SparsePoly) -> Self {
        Function::Poly(p)
    }
}

impl From<ExpLinearFixture> for Function {
    fn from(f: ExpLinearFixture) -> Self {
        Function::ExpLinear(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MainKind {
    /// `Der >= e^{-n} Cap` for entire functions in `n` variables.
    Entire,
    /// `Der >= vdw(n) Cap` for homogeneous polynomials of degree `n` in `n` variables.
    Homogeneous,
    /// `Der >= prod_{i<=n} L(i) Cap` for polynomials in `n` variables.
    Polynomial,
}

fn lower_note(provenance: &Provenance) -> &'static str {
    if provenance.is_constructive() {
        ""
    } else {
        "input has no strong log-concavity certificate; the lower bound is evaluated, not guaranteed"
    }
}

fn f64_of(r: &Rational) -> f64 {
    to_f64(r)
}

/// `Cap(f) >= Der_f(1,...,1) >= c Cap(f)` with the constant of `kind`.
pub fn verify_main_thm(f: &Function, kind: MainKind, provenance: &Provenance) -> Result<Vec<BoundReport>> {
    let n = f.num_vars();
    let ones = MultiIndex::ones(n);
    let d = digest(&(f, kind, provenance));
    let der = f.der_at_zero(&ones)?;
    let cap = f.c_f(&ones)?;
    let der_f = f64_of(&der);
    let mut out = vec![BoundReport::compare("cap-upper", cap.value, der_f, d.clone())];
    let (id, constant) = match kind {
        MainKind::Entire => ("exp-lower-entire", (-(n as f64)).exp()),
        MainKind::Homogeneous => {
            let ok = f.as_poly().is_some_and(|p| p.homogeneous_degree() == Some(n as u32));
            if !ok {
                out.push(BoundReport::not_applicable(
                    "vdw-lower-homogeneous",
                    d,
                    format!("needs a homogeneous polynomial of degree {n}"),
                ));
                return Ok(out);
            }
            ("vdw-lower-homogeneous", f64_of(&vdw(n as u32)))
        }
        MainKind::Polynomial => {
            if f.as_poly().is_none() {
                out.push(BoundReport::not_applicable("l-lower-polynomial", d, "needs a polynomial"));
                return Ok(out);
            }
            ("l-lower-polynomial", l_product(n as u32))
        }
    };
    out.push(
        BoundReport::compare(id, der_f, constant * cap.value, d)
            .with_constant("constant", constant)
            .with_constant("capacity", cap.value)
            .guaranteed(provenance.is_constructive())
            .with_note(lower_note(provenance)),
    );
    Ok(out)
}

/// `VDW(R) C_f(R) >= Der_f(R) >= e^{-|R|} C_f(R)`.
pub fn verify_exp_waer(f: &Function, r: &MultiIndex, provenance: &Provenance) -> Result<Vec<BoundReport>> {
    f.check_dims(r)?;
    let d = digest(&(f, r, provenance));
    let der = f64_of(&f.der_at_zero(r)?);
    let c = f.c_f(r)?;
    let upper = f64_of(&vdw_product(r));
    let lower = (-(r.total() as f64)).exp();
    Ok(vec![
        BoundReport::compare("monomial-upper", upper * c.value, der, d.clone())
            .with_constant("vdw_product", upper)
            .with_constant("c_f", c.value),
        BoundReport::compare("monomial-lower-entire", der, lower * c.value, d)
            .with_constant("constant", lower)
            .with_constant("c_f", c.value)
            .guaranteed(provenance.is_constructive())
            .with_note(lower_note(provenance)),
    ])
}

/// The two-sided bounds on `Der_f(R)` in terms of `C_f(R)`; for homogeneous
/// polynomials of degree `|R|` also the sharper `vdw(|R|)` lower bound.
pub fn verify_monomial_bounds(f: &Function, r: &MultiIndex, provenance: &Provenance) -> Result<Vec<BoundReport>> {
    let mut out = verify_exp_waer(f, r, provenance)?;
    if let Some(p) = f.as_poly() {
        if p.homogeneous_degree() == Some(r.total()) {
            let d = digest(&(f, r, provenance));
            let der = f64_of(&p.der_at_zero(r)?);
            let c = capacity::c_f_at(p, r)?;
            let constant = f64_of(&vdw(r.total()));
            out.push(
                BoundReport::compare("monomial-lower-homogeneous", der, constant * c.value, d)
                    .with_constant("constant", constant)
                    .with_constant("c_f", c.value)
                    .guaranteed(provenance.is_constructive())
                    .with_note(lower_note(provenance)),
            );
        }
    }
    Ok(out)
}

/// `Cap(p) >= Der_p(1,...,1) >= ((k-1)/k)^{(k-1)(n-k)} vdw(k) Cap(p)` for
/// `p` homogeneous of degree `n` in `n` variables with every variable degree
/// at most `k`.
pub fn verify_schrijver(p: &SparsePoly, k: u32, provenance: &Provenance) -> Result<Vec<BoundReport>> {
    let n = p.num_vars() as u32;
    let d = digest(&(p, k, provenance));
    let max_deg = p.variable_degrees().into_iter().max().unwrap_or(0);
    if p.homogeneous_degree() != Some(n) || k == 0 || k > n || max_deg > k {
        return Ok(vec![BoundReport::not_applicable(
            "schrijver-lower",
            d,
            format!("needs degree {n} homogeneous input with variable degrees <= k = {k} <= {n}"),
        )]);
    }
    let ones = MultiIndex::ones(n as usize);
    let der = f64_of(&p.der_at_zero(&ones)?);
    let cap = capacity::capacity(p)?;
    let constant = f64_of(&schrijver_constant(k, n));
    Ok(vec![
        BoundReport::compare("cap-upper", cap.value, der, d.clone()),
        BoundReport::compare("schrijver-lower", der, constant * cap.value, d)
            .with_constant("constant", constant)
            .with_constant("capacity", cap.value)
            .with_constant("k", k as f64)
            .guaranteed(provenance.is_constructive())
            .with_note(lower_note(provenance)),
    ])
}

/// Lower bounds on `<p, q>` from `A = inf p/x^l` and `B = inf q/x^l`.
pub fn verify_inner_product(
    p: &SparsePoly,
    q: &SparsePoly,
    l: &[Rational],
    provenance: &Provenance,
) -> Result<Vec<BoundReport>> {
    let m = p.num_vars();
    if q.num_vars() != m || l.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: if q.num_vars() != m { q.num_vars() } else { l.len() },
        });
    }
    let n = p.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    let nq = q.homogeneous_degree().ok_or(Error::NotHomogeneous)?;
    if n != nq {
        return Err(Error::DegreeMismatch { left: n, right: nq });
    }
    if l.iter().any(Signed::is_negative) || l.iter().sum::<Rational>() != Rational::from_integer(n.into()) {
        return Err(Error::InvalidArgument(format!("exponent vector must be nonnegative with sum {n}")));
    }
    let l_str: Vec<String> = l.iter().map(format_rational).collect();
    let d = digest(&(p, q, &l_str, provenance));
    let opts = SolverOptions::default();
    let a = capacity::inf_ratio(p, l, &opts)?;
    let b = capacity::inf_ratio(q, l, &opts)?;
    if a.status == CapacityStatus::Zero || b.status == CapacityStatus::Zero {
        return Ok(vec![BoundReport::not_applicable(
            "inner-product-lower",
            d,
            "the exponent vector lies outside one of the Newton polytopes",
        )]);
    }
    let ab = a.value * b.value;
    let ip = inner_product(p, q)?;
    let ip_f = f64_of(&ip);
    let mm = m as u32;
    let constant = f64_of(&(vdw(n * mm) / pow_rational(&vdw(n), m as i64)));
    let mut out = vec![BoundReport::compare("inner-product-lower", ip_f, ab * constant, d.clone())
        .with_constant("A", a.value)
        .with_constant("B", b.value)
        .with_constant("constant", constant)
        .guaranteed(provenance.is_constructive())
        .with_note(lower_note(provenance))];

    let multilinear = |f: &SparsePoly| f.variable_degrees().iter().all(|&x| x <= 1);
    if multilinear(p) && multilinear(q) {
        let gpoly = reflected_product(p, q, 1)?;
        let via_g = gpoly.der_at_zero(&MultiIndex::ones(m))?;
        let constant = 2f64.powi(1 - m as i32);
        out.push(
            BoundReport::compare("inner-product-multilinear", ip_f, ab * constant, d.clone())
                .with_constant("A", a.value)
                .with_constant("B", b.value)
                .with_constant("constant", constant)
                .guaranteed(provenance.is_constructive() && via_g == ip)
                .with_note(if via_g == ip {
                    "inner product recovered as the all-ones derivative of the reflected product"
                } else {
                    "reflected-product derivative disagrees with the inner product"
                }),
        );
    }

    let weighted: Rational = p
        .terms()
        .filter_map(|(idx, a)| {
            let b = q.coefficient(idx);
            (!b.is_zero()).then(|| a * b * Rational::from_integer(idx.factorial_product()))
        })
        .sum();
    let constant = f64_of(&Rational::new(factorial(n), num_traits::pow(num_bigint::BigInt::from(m), n as usize)));
    out.push(
        BoundReport::compare("inner-product-conjecture", f64_of(&weighted), ab * constant, d)
            .with_constant("A", a.value)
            .with_constant("B", b.value)
            .with_constant("constant", constant)
            .guaranteed(false)
            .with_note("conjectured sharp form; a violation here is a finding"),
    );
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NewtonKind {
    Entire,
    Homogeneous,
    /// Homogeneous with every variable degree at most `k`.
    Sparse { k: u32 },
}

/// `Y_0 = sum a_i Y_i` with `a` a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub y0: MultiIndex,
    pub parts: Vec<(Rational, MultiIndex)>,
}

impl Decomposition {
    pub fn validate(&self) -> Result<()> {
        let m = self.y0.len();
        if self.parts.is_empty() {
            return Err(Error::InvalidArgument("decomposition needs at least one part".into()));
        }
        if let Some((_, y)) = self.parts.iter().find(|(_, y)| y.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: y.len(),
            });
        }
        if self.parts.iter().any(|(a, _)| a.is_negative()) {
            return Err(Error::InvalidArgument("weights must be nonnegative".into()));
        }
        if self.parts.iter().map(|(a, _)| a).sum::<Rational>() != Rational::one() {
            return Err(Error::InvalidArgument("weights must sum to 1".into()));
        }
        for i in 0..m {
            let s: Rational = self
                .parts
                .iter()
                .map(|(a, y)| a * Rational::from_integer(y.entries()[i].into()))
                .sum();
            if s != Rational::from_integer(self.y0.entries()[i].into()) {
                return Err(Error::InvalidArgument(format!(
                    "weighted sum differs from Y0 in coordinate {i}"
                )));
            }
        }
        Ok(())
    }

    /// The equal-weight split `Y_0 = (Y_1 + Y_2) / 2`.
    pub fn midpoint(y1: MultiIndex, y2: MultiIndex) -> Result<Self> {
        if y1.len() != y2.len() {
            return Err(Error::DimensionMismatch {
                expected: y1.len(),
                found: y2.len(),
            });
        }
        let sum = y1.add(&y2);
        if sum.entries().iter().any(|v| v % 2 == 1) {
            return Err(Error::InvalidArgument("Y1 + Y2 must be even".into()));
        }
        let y0 = MultiIndex::new(sum.entries().iter().map(|v| v / 2).collect());
        Ok(Decomposition {
            y0,
            parts: vec![(rat(1, 2), y1), (rat(1, 2), y2)],
        })
    }
}

#[derive(Serialize)]
struct DecompositionDigest<'a> {
    y0: &'a MultiIndex,
    parts: Vec<(String, &'a MultiIndex)>,
}

/// `Der(Y_0) >= K prod Der(Y_i)^{a_i}` with
/// `K = base * prod VDW(Y_i)^{-a_i}` and `base` set by the kind:
/// `e^{-|Y_0|}`, `vdw(n)`, or `((k-1)/k)^{(k-1)(n-k)} vdw(k)`.
/// For the two rational kinds the comparison is also decided exactly by
/// raising both sides to the common denominator of the weights.
pub fn verify_newton_multivariate(
    f: &Function,
    dec: &Decomposition,
    kind: NewtonKind,
    provenance: &Provenance,
) -> Result<BoundReport> {
    dec.validate()?;
    f.check_dims(&dec.y0)?;
    let d = digest(&(
        f,
        DecompositionDigest {
            y0: &dec.y0,
            parts: dec.parts.iter().map(|(a, y)| (format_rational(a), y)).collect(),
        },
        kind,
        provenance,
    ));
    let (id, base): (&str, Option<Rational>) = match kind {
        NewtonKind::Entire => ("newton-entire", None),
        NewtonKind::Homogeneous | NewtonKind::Sparse { .. } => {
            let id = if matches!(kind, NewtonKind::Homogeneous) {
                "newton-homogeneous"
            } else {
                "newton-sparse"
            };
            let Some(n) = f.as_poly().and_then(SparsePoly::homogeneous_degree) else {
                return Ok(BoundReport::not_applicable(id, d, "needs a homogeneous polynomial"));
            };
            match kind {
                NewtonKind::Sparse { k } => {
                    let max_deg = f.as_poly().unwrap().variable_degrees().into_iter().max().unwrap_or(0);
                    if k == 0 || k > n || max_deg > k {
                        return Ok(BoundReport::not_applicable(
                            id,
                            d,
                            format!("needs variable degrees <= k = {k} <= {n}"),
                        ));
                    }
                    (id, Some(schrijver_constant(k, n)))
                }
                _ => (id, Some(vdw(n))),
            }
        }
    };

    let left = f.der_at_zero(&dec.y0)?;
    let ders = dec
        .parts
        .iter()
        .map(|(_, y)| f.der_at_zero(y))
        .collect::<Result<Vec<_>>>()?;
    let active: Vec<(&Rational, &MultiIndex, &Rational)> = dec
        .parts
        .iter()
        .zip(&ders)
        .filter(|((a, _), _)| a.is_positive())
        .map(|((a, y), dv)| (a, y, dv))
        .collect();
    let log_base = match &base {
        Some(b) => ln_rational(b),
        None => -(dec.y0.total() as f64),
    };
    let log_k = log_base
        - active
            .iter()
            .map(|(a, y, _)| to_f64(a) * ln_rational(&vdw_product(y)))
            .sum::<f64>();
    let any_zero = active.iter().any(|(_, _, dv)| dv.is_zero());
    let right = if any_zero {
        0.0
    } else {
        (log_k + active.iter().map(|(a, _, dv)| to_f64(a) * ln_rational(dv)).sum::<f64>()).exp()
    };
    let mut report = BoundReport::compare(id, to_f64(&left), right, d)
        .with_constant("constant", log_k.exp())
        .guaranteed(provenance.is_constructive())
        .with_note(lower_note(provenance));

    if let Some(b) = base {
        let q = active
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, (a, _, _)| num_integer::Integer::lcm(&acc, a.denom()));
        if any_zero {
            report = report.with_exact(true);
        } else if let Ok(q) = u32::try_from(&q) {
            if q <= 64 {
                // left^q >= base^q * prod (Der(Y_i) / VDW(Y_i))^{q a_i}
                let mut rhs = pow_rational(&b, q as i64);
                for (a, y, dv) in &active {
                    let e = (*a * Rational::from_integer(q.into())).to_integer();
                    let e: i64 = i64::try_from(&e).expect("small exponent");
                    rhs *= pow_rational(&(*dv / vdw_product(y)), e);
                }
                report = report.with_exact(pow_rational(&left, q as i64) >= rhs);
            }
        }
    }
    Ok(report)
}

/// `Der(R)^2 >= Der(R + e_i - e_j) Der(R - e_i + e_j)`, exact.
pub fn verify_exchange(p: &SparsePoly, r: &MultiIndex, i: usize, j: usize, provenance: &Provenance) -> Result<BoundReport> {
    let m = p.num_vars();
    if r.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: r.len(),
        });
    }
    if i >= m || j >= m || i == j {
        return Err(Error::InvalidArgument(format!("need distinct variable indices below {m}")));
    }
    let d = digest(&(p, r, i, j, provenance));
    if r.entries()[i] == 0 || r.entries()[j] == 0 {
        return Ok(BoundReport::not_applicable(
            "exchange-lower",
            d,
            "both exchanged coordinates must be positive",
        ));
    }
    let mut r1 = r.entries().to_vec();
    let mut r2 = r.entries().to_vec();
    r1[i] += 1;
    r1[j] -= 1;
    r2[i] -= 1;
    r2[j] += 1;
    let left = p.der_at_zero(r)?;
    let d1 = p.der_at_zero(&MultiIndex::new(r1))?;
    let d2 = p.der_at_zero(&MultiIndex::new(r2))?;
    let right = to_f64(&d1).sqrt() * to_f64(&d2).sqrt();
    Ok(BoundReport::compare("exchange-lower", to_f64(&left), right, d)
        .with_exact(&left * &left >= &d1 * &d2)
        .guaranteed(provenance.is_constructive())
        .with_note(lower_note(provenance)))
}

/// `C_f(Y_0)^2 >= C_f(Y_1) C_f(Y_2)` for `Y_0 = (Y_1 + Y_2) / 2`.
pub fn cf_midpoint(f: &Function, y1: &MultiIndex, y2: &MultiIndex, provenance: &Provenance) -> Result<BoundReport> {
    let dec = Decomposition::midpoint(y1.clone(), y2.clone())?;
    f.check_dims(y1)?;
    let d = digest(&(f, y1, y2, provenance));
    let c0 = f.c_f(&dec.y0)?.value;
    let c1 = f.c_f(y1)?.value;
    let c2 = f.c_f(y2)?.value;
    Ok(BoundReport::compare("capacity-midpoint-logconcave", c0 * c0, c1 * c2, d)
        .with_constant("c_mid", c0)
        .with_constant("c_1", c1)
        .with_constant("c_2", c2)
        .guaranteed(provenance.is_constructive())
        .with_note(lower_note(provenance)))
}

/// `log Der(Y_0) - (log Der(Y_1) + log Der(Y_2)) / 2`; `None` when a
/// derivative vanishes.
pub fn der_midpoint_deficit(f: &Function, y1: &MultiIndex, y2: &MultiIndex) -> Result<Option<f64>> {
    let dec = Decomposition::midpoint(y1.clone(), y2.clone())?;
    let d0 = f.der_at_zero(&dec.y0)?;
    let d1 = f.der_at_zero(y1)?;
    let d2 = f.der_at_zero(y2)?;
    if d0.is_zero() || d1.is_zero() || d2.is_zero() {
        return Ok(None);
    }
    // exact ratio first, then one logarithm
    let ratio = &d0 * &d0 / (&d1 * &d2);
    Ok(Some(0.5 * ln_rational(&ratio)))
}

/// Random lattice midpoint triples `Y_0 +- delta`. For homogeneous
/// polynomials all three points stay on the degree level.
fn random_triples<R: Rng>(f: &Function, count: usize, rng: &mut R) -> Vec<(MultiIndex, MultiIndex)> {
    let m = f.num_vars();
    let (homogeneous, caps) = match f {
        Function::Poly(p) => (p.homogeneous_degree(), p.variable_degrees()),
        Function::ExpLinear(_) => (None, vec![3; m]),
    };
    (0..count)
        .map(|_| {
            let y0: Vec<u32> = match homogeneous {
                Some(n) => {
                    let mut y = vec![0u32; m];
                    for _ in 0..n {
                        y[rng.gen_range(0..m)] += 1;
                    }
                    y
                }
                None => caps.iter().map(|&c| rng.gen_range(0..=c)).collect(),
            };
            let mut delta = vec![0i64; m];
            for _ in 0..m {
                let i = rng.gen_range(0..m);
                if homogeneous.is_some() {
                    let j = rng.gen_range(0..m);
                    if i != j && (delta[i] + 1).abs() <= y0[i] as i64 && (delta[j] - 1).abs() <= y0[j] as i64 {
                        delta[i] += 1;
                        delta[j] -= 1;
                    }
                } else {
                    let step = if rng.gen_bool(0.5) { 1 } else { -1 };
                    if (delta[i] + step).abs() <= y0[i] as i64 {
                        delta[i] += step;
                    }
                }
            }
            let y1 = y0.iter().zip(&delta).map(|(&a, &b)| (a as i64 + b) as u32).collect();
            let y2 = y0.iter().zip(&delta).map(|(&a, &b)| (a as i64 - b) as u32).collect();
            (MultiIndex::new(y1), MultiIndex::new(y2))
        })
        .collect()
}

/// Midpoint log-concavity of `C_f` on `triples` random lattice triples.
pub fn verify_cf_logconcavity(f: &Function, triples: usize, seed: u64, provenance: &Provenance) -> Result<Vec<BoundReport>> {
    let mut gen = rng::stream(seed, "cf-logconcavity");
    random_triples(f, triples, &mut gen)
        .iter()
        .map(|(y1, y2)| cf_midpoint(f, y1, y2, provenance))
        .collect()
}
