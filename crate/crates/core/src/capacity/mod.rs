//! `C_f(R) = inf_{x > 0} f(x) / prod (x_i / r_i)^{r_i}` and `Cap(f) = C_f(1, ..., 1)`.
//!
//! In log coordinates `x = e^y` the objective is
//! `phi(y) = log sum_s a_s e^{<s - R, y>} + sum r_i log r_i`, a log-sum-exp
//! of affine forms. Before any floating point work the target is located
//! exactly against the Newton polytope:
//!
//! - outside the polytope the infimum is 0;
//! - in the relative interior the infimum is attained;
//! - on the boundary it equals the infimum of the terms on the smallest face
//!   containing the target, which is attained.
//!
//! The optimization then runs in coordinates of the span of `{s - R}`, so
//! directions along which `phi` is constant (such as `1` for homogeneous
//! polynomials of degree `|R|`) never enter the Newton system.

mod newton;
mod span;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exp_linear::ExpLinearFixture;
use crate::geometry::lp::{self, LpOutcome};
use crate::geometry::SupportSet;
use crate::numeric::{ln_rational, to_f64, Rational};
use crate::poly::{log_sum_exp, MultiIndex, SparsePoly};
use newton::{LogSumExp, NewtonSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CapacityStatus {
    Attained,
    FaceRestricted,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    /// `None` when the value is exactly zero.
    pub log_value: Option<f64>,
    /// Positive minimizer `x`, reported only when the infimum is attained.
    pub minimizer: Option<Vec<f64>>,
    pub status: CapacityStatus,
    pub iterations: usize,
    pub gradient_norm: f64,
    /// Number of terms the optimization actually ran on.
    pub active_terms: usize,
}

impl CapacityResult {
    fn zero() -> Self {
        CapacityResult {
            value: 0.0,
            log_value: None,
            minimizer: None,
            status: CapacityStatus::Zero,
            iterations: 0,
            gradient_norm: 0.0,
            active_terms: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Relative stopping tolerance on the gradient infinity norm.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Divide by `prod (x_i / r_i)^{r_i}` rather than `prod x_i^{r_i}`.
    pub scaled: bool,
    /// Starting point in log coordinates; the origin by default.
    pub initial_point: Option<Vec<f64>>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            max_iterations: 500,
            scaled: true,
            initial_point: None,
        }
    }
}

/// `Cap(p)`.
pub fn capacity(p: &SparsePoly) -> Result<CapacityResult> {
    capacity_with(p, &SolverOptions::default())
}

pub fn capacity_with(p: &SparsePoly, opts: &SolverOptions) -> Result<CapacityResult> {
    c_f_at_with(p, &MultiIndex::ones(p.num_vars()), opts)
}

/// `C_p(R)`.
pub fn c_f_at(p: &SparsePoly, r: &MultiIndex) -> Result<CapacityResult> {
    c_f_at_with(p, r, &SolverOptions::default())
}

pub fn c_f_at_with(p: &SparsePoly, r: &MultiIndex, opts: &SolverOptions) -> Result<CapacityResult> {
    solve(p, &r.to_rationals(), opts)
}

/// `C_p(r)` for a nonnegative rational target; `opts.scaled` selects the
/// normalization.
pub fn c_f_rational(p: &SparsePoly, r: &[Rational], opts: &SolverOptions) -> Result<CapacityResult> {
    solve(p, r, opts)
}

/// `inf_{x > 0} p(x) / prod x_i^{l_i}` for a nonnegative rational exponent
/// vector `l`, without the `l_i^{l_i}` normalization.
pub fn inf_ratio(p: &SparsePoly, l: &[Rational], opts: &SolverOptions) -> Result<CapacityResult> {
    let opts = SolverOptions {
        scaled: false,
        ..opts.clone()
    };
    solve(p, l, &opts)
}

/// Closed form for `exp(<a, x>)`: the infimum sits at `x_i = r_i / a_i`.
pub fn c_f_exp_linear(f: &ExpLinearFixture, r: &MultiIndex) -> Result<CapacityResult> {
    let log_value = f.log_c_f(r)?;
    let minimizer = r.entries().iter().all(|&ri| ri > 0).then(|| {
        r.entries()
            .iter()
            .zip(f.coeffs())
            .map(|(&ri, a)| ri as f64 / to_f64(a))
            .collect()
    });
    Ok(CapacityResult {
        value: log_value.exp(),
        log_value: Some(log_value),
        minimizer,
        status: CapacityStatus::Attained,
        iterations: 0,
        gradient_norm: 0.0,
        active_terms: 0,
    })
}

/// `sum r_i log r_i` with `0 log 0 = 0`.
fn entropy_offset(target: &[Rational]) -> f64 {
    target
        .iter()
        .filter(|r| r.is_positive())
        .map(|r| to_f64(r) * ln_rational(r))
        .sum()
}

/// The log-domain objective `phi(y)` on the full polynomial.
pub fn objective(p: &SparsePoly, r: &MultiIndex, y: &[f64]) -> Result<f64> {
    if r.len() != p.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.num_vars(),
            found: r.len(),
        });
    }
    let target = r.to_rationals();
    let shift: f64 = r.entries().iter().zip(y).map(|(&ri, yi)| ri as f64 * yi).sum();
    Ok(p.log_evaluate(y)? - shift + entropy_offset(&target))
}

fn check_input(p: &SparsePoly, target: &[Rational]) -> Result<()> {
    if target.len() != p.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: p.num_vars(),
            found: target.len(),
        });
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(bad) = target.iter().find(|t| t.is_negative()) {
        return Err(Error::InvalidArgument(format!(
            "capacity target entries must be nonnegative, got {bad}"
        )));
    }
    Ok(())
}

/// Where the target sits relative to the Newton polytope of the terms.
enum Location {
    Outside,
    RelativeInterior,
    /// Indices (into the term list) of the minimal face.
    Boundary(Vec<usize>),
}

fn locate(points: &[Vec<Rational>], target: &[Rational], dirs: &[Vec<Rational>], rank: usize) -> Result<Location> {
    if symmetric_certificate(points, target, dirs, rank) {
        return Ok(Location::RelativeInterior);
    }
    match relint_lp(points, target) {
        None => return Ok(Location::Outside),
        Some(true) => return Ok(Location::RelativeInterior),
        Some(false) => {}
    }
    let dim = target.len();
    let lattice: Vec<MultiIndex> = points
        .iter()
        .map(|p| MultiIndex::new(p.iter().map(|v| v.to_integer().try_into().unwrap_or(u32::MAX)).collect()))
        .collect();
    let set = SupportSet::new(dim, lattice.iter().cloned())?;
    let face = set
        .minimal_face(target)?
        .ok_or_else(|| Error::InvalidArgument("inconsistent polytope membership".into()))?;
    // SupportSet sorts its points; map back to term order
    let keep: Vec<usize> = face
        .iter()
        .map(|&i| {
            lattice
                .iter()
                .position(|p| p == &set.points()[i])
                .expect("face point comes from the term list")
        })
        .collect();
    Ok(Location::Boundary(keep))
}

/// If the points whose mirror image `2R - s` is also a point already span
/// every direction, `R` is their uniform average and so lies in the
/// relative interior.
fn symmetric_certificate(points: &[Vec<Rational>], target: &[Rational], dirs: &[Vec<Rational>], rank: usize) -> bool {
    if rank == 0 {
        return true;
    }
    let two = Rational::from_integer(2.into());
    let mut sorted: Vec<&Vec<Rational>> = points.iter().collect();
    sorted.sort();
    let mut basis = span::EchelonBasis::new(target.len());
    for (p, d) in points.iter().zip(dirs) {
        let mirror: Vec<Rational> = p.iter().zip(target).map(|(s, r)| &two * r - s).collect();
        if sorted.binary_search(&&mirror).is_ok() {
            basis.insert(d);
            if basis.rank() == rank {
                return true;
            }
        }
    }
    false
}

/// Maximizes the smallest convex weight over representations of the target.
/// `None` when the target is outside the hull, otherwise whether every point
/// can carry positive weight (equivalently, the target is in the relative
/// interior).
fn relint_lp(points: &[Vec<Rational>], target: &[Rational]) -> Option<bool> {
    // weights lambda_s = t + mu_s with mu >= 0, t >= 0; maximize t
    let n = points.len();
    let dim = target.len();
    let mut a: Vec<Vec<Rational>> = Vec::with_capacity(dim + 1);
    for i in 0..dim {
        let mut row: Vec<Rational> = points.iter().map(|p| p[i].clone()).collect();
        row.push(points.iter().map(|p| p[i].clone()).sum());
        a.push(row);
    }
    let mut ones = vec![Rational::one(); n];
    ones.push(Rational::from_integer((n as i64).into()));
    a.push(ones);
    let mut b = target.to_vec();
    b.push(Rational::one());
    let mut cost = vec![Rational::zero(); n];
    cost.push(Rational::one());
    match lp::solve(&a, &b, &cost) {
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("weights are bounded by the simplex"),
        LpOutcome::Optimal { value, .. } => Some(value.is_positive()),
    }
}

fn solve(p: &SparsePoly, target: &[Rational], opts: &SolverOptions) -> Result<CapacityResult> {
    check_input(p, target)?;
    let m = p.num_vars();
    // variables with r_i = 0 go to zero: drop every term that involves them
    let kept: Vec<(&MultiIndex, &Rational)> = p
        .terms()
        .filter(|(s, _)| {
            s.entries()
                .iter()
                .zip(target)
                .all(|(&si, ri)| si == 0 || !ri.is_zero())
        })
        .collect();
    if kept.is_empty() {
        return Ok(CapacityResult::zero());
    }
    let substituted = kept.len() < p.len();
    let points: Vec<Vec<Rational>> = kept.iter().map(|(s, _)| s.to_rationals()).collect();
    let dirs: Vec<Vec<Rational>> = points
        .iter()
        .map(|s| s.iter().zip(target).map(|(a, b)| a - b).collect())
        .collect();
    let rank = span::exact_rank(m, &dirs, m);

    let (active, restricted) = match locate(&points, target, &dirs, rank)? {
        Location::Outside => return Ok(CapacityResult::zero()),
        Location::RelativeInterior => ((0..kept.len()).collect::<Vec<_>>(), substituted),
        Location::Boundary(face) => (face, true),
    };

    let face_dirs: Vec<Vec<Rational>> = active.iter().map(|&i| dirs[i].clone()).collect();
    let face_rank = if restricted {
        span::exact_rank(m, &face_dirs, m)
    } else {
        rank
    };
    let basis = span::orthonormal_basis(m, &face_dirs, face_rank);
    let offsets: Vec<f64> = active.iter().map(|&i| ln_rational(kept[i].1)).collect();
    let scale = if opts.scaled { entropy_offset(target) } else { 0.0 };
    let status = if restricted {
        CapacityStatus::FaceRestricted
    } else {
        CapacityStatus::Attained
    };

    let (phi, y, iterations, gradient_norm) = if face_rank == 0 {
        // every active term is the target monomial itself
        (log_sum_exp(&offsets), DVector::zeros(m), 0, 0.0)
    } else {
        let full = DMatrix::from_fn(active.len(), m, |r, c| to_f64(&face_dirs[r][c]));
        let reduced = &full * &basis;
        let f = LogSumExp::new(reduced, offsets);
        let z0 = match &opts.initial_point {
            Some(y0) if y0.len() == m => basis.transpose() * DVector::from_column_slice(y0),
            Some(y0) => {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: y0.len(),
                })
            }
            None => DVector::zeros(face_rank),
        };
        let settings = NewtonSettings {
            max_iterations: opts.max_iterations,
            tolerance: opts.tolerance,
            armijo: 1e-4,
            ridge: 1e-12,
        };
        let out = f.minimize(z0, settings, scale, |g| (&basis * g).amax());
        if !out.converged {
            return Err(Error::NonConvergence {
                iterations: out.iterations,
                gradient_norm: out.gradient_norm,
                objective: out.value + scale,
            });
        }
        (out.value, &basis * &out.z, out.iterations, out.gradient_norm)
    };

    let log_value = phi + scale;
    Ok(CapacityResult {
        value: log_value.exp(),
        log_value: Some(log_value),
        minimizer: (status == CapacityStatus::Attained).then(|| y.iter().map(|v| v.exp()).collect()),
        status,
        iterations,
        gradient_norm,
        active_terms: active.len(),
    })
}
