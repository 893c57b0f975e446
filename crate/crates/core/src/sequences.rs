//! Weighted shift flows on coefficient vectors and the weights under which
//! they keep moment vectors log-concave.
//!
//! For weights `b_0..b_k` and `c_i = b_i / b_{i+1}`, the moment vector
//! `Mom_b(t) = (b_0 p(t), b_1 p'(t), ..., b_k p^{(k)}(t))` of a polynomial of
//! degree at most `k` solves `Mom' = Shift_c Mom`, so
//! `Mom_b(t) = exp(t Shift_c) Mom_b(0)`.

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;

use crate::concavity::{lc_member, univariate_coefficients};
use crate::error::{Error, Result};
use crate::numeric::{factorial, format_rational, int, pow_rational, rat, Rational};
use crate::poly::{MultiIndex, SparsePoly};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSequence {
    b: Vec<Rational>,
}

impl WeightSequence {
    pub fn new(b: Vec<Rational>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidArgument("weight sequence must be nonempty".into()));
        }
        if let Some(v) = b.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "weights must be positive, got {}",
                format_rational(v)
            )));
        }
        Ok(WeightSequence { b })
    }

    /// `b_i = (n - i)!` for `i = 0..=n`.
    pub fn factorial_tail(n: u32) -> Self {
        WeightSequence {
            b: (0..=n).map(|i| Rational::from_integer(factorial(n - i))).collect(),
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.b
    }

    /// `c_i = b_i / b_{i+1}`.
    pub fn ratios(&self) -> Vec<Rational> {
        self.b.windows(2).map(|w| &w[0] / &w[1]).collect()
    }

    pub fn shift(&self) -> ShiftOperator {
        ShiftOperator { c: self.ratios() }
    }
}

/// `(x_0, ..., x_n) -> (c_0 x_1, ..., c_{n-1} x_n, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftOperator {
    c: Vec<Rational>,
}

impl ShiftOperator {
    pub fn new(c: Vec<Rational>) -> Result<Self> {
        if let Some(v) = c.iter().find(|v| v.is_negative()) {
            return Err(Error::NegativeCoefficient(format_rational(v)));
        }
        Ok(ShiftOperator { c })
    }

    pub fn weights(&self) -> &[Rational] {
        &self.c
    }

    /// Length of the vectors it acts on.
    pub fn dim(&self) -> usize {
        self.c.len() + 1
    }

    fn check(&self, x: &[Rational]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check(x)?;
        let mut out: Vec<Rational> = self.c.iter().zip(&x[1..]).map(|(c, v)| c * v).collect();
        out.push(Rational::zero());
        Ok(out)
    }

    /// `(I + t Shift) x`.
    pub fn step(&self, t: &Rational, x: &[Rational]) -> Result<Vec<Rational>> {
        let s = self.apply(x)?;
        Ok(x.iter().zip(s).map(|(a, b)| a + t * b).collect())
    }

    /// `exp(t Shift) x`, a finite sum since the shift is nilpotent.
    pub fn exp_apply(&self, t: &Rational, x: &[Rational]) -> Result<Vec<Rational>> {
        self.check(x)?;
        let mut acc = x.to_vec();
        let mut term = x.to_vec();
        for j in 1..self.dim() {
            term = self.apply(&term)?;
            if term.iter().all(Zero::is_zero) {
                break;
            }
            let f = pow_rational(t, j as i64) / Rational::from_integer(factorial(j as u32));
            for (a, v) in acc.iter_mut().zip(&term) {
                *a += &f * v;
            }
        }
        Ok(acc)
    }
}

pub fn shift_exp_apply(s: &ShiftOperator, t: &Rational, x: &[Rational]) -> Result<Vec<Rational>> {
    s.exp_apply(t, x)
}

/// Concavity of `(c_0, ..., c_{k-1}, 0, ...)` in the form
/// `2 c_i >= c_{i+1} + c_{i-1}` for `1 <= i <= k-2` and `2 c_{k-1} >= c_{k-2}`.
pub fn propagatable_check(b: &WeightSequence) -> bool {
    let c = b.ratios();
    let k = c.len();
    if k < 2 {
        return true;
    }
    let two = int(2);
    let interior = (1..k - 1).all(|i| &two * &c[i] >= &c[i + 1] + &c[i - 1]);
    interior && &two * &c[k - 1] >= c[k - 2]
}

/// `Mom_b(t)` evaluated directly from the derivatives of `p`.
pub fn moment_vector(b: &WeightSequence, p: &SparsePoly, t: &Rational) -> Result<Vec<Rational>> {
    let a = univariate_coefficients(p)?;
    let k = b.b.len() - 1;
    if a.len() - 1 > k {
        return Err(Error::DegreeTooSmall {
            requested: k as u32,
            degree: (a.len() - 1) as u32,
        });
    }
    Ok((0..=k)
        .map(|i| {
            // p^{(i)}(t) = sum_{j >= i} a_j j!/(j-i)! t^{j-i}
            let d: Rational = (i..a.len())
                .filter(|&j| !a[j].is_zero())
                .map(|j| {
                    let fall = Rational::new(factorial(j as u32), factorial((j - i) as u32));
                    &a[j] * fall * pow_rational(t, (j - i) as i64)
                })
                .sum();
            &b.b[i] * d
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub t: String,
    pub moments: Vec<String>,
    pub in_lc: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub propagatable: bool,
    /// `Mom_b(0)` is log-concave; without it nothing is claimed.
    pub precondition: bool,
    pub points: Vec<TrajectoryPoint>,
    pub all_in_lc: bool,
    /// The shift flow reproduced the direct derivative evaluation at every `t`.
    pub flow_matches: bool,
}

/// LC membership of `Mom_b(t)` along a rational grid of `t >= 0`.
pub fn lc_trajectory_check(b: &WeightSequence, p: &SparsePoly, grid: &[Rational]) -> Result<TrajectoryReport> {
    if let Some(t) = grid.iter().find(|t| t.is_negative()) {
        return Err(Error::InvalidArgument(format!(
            "grid points must be nonnegative, got {}",
            format_rational(t)
        )));
    }
    let start = moment_vector(b, p, &Rational::zero())?;
    let shift = b.shift();
    let mut points = Vec::with_capacity(grid.len());
    let mut flow_matches = true;
    for t in grid {
        let m = moment_vector(b, p, t)?;
        flow_matches &= shift.exp_apply(t, &start)? == m;
        points.push(TrajectoryPoint {
            t: format_rational(t),
            in_lc: lc_member(&m),
            moments: m.iter().map(format_rational).collect(),
        });
    }
    Ok(TrajectoryReport {
        propagatable: propagatable_check(b),
        precondition: lc_member(&start),
        all_in_lc: points.iter().all(|p| p.in_lc),
        points,
        flow_matches,
    })
}

/// Weights `b = (1, 1, 3, 3)` (so `c = (1, 1/3, 1)`, not propagatable) and
/// the cubic with `Mom_b(0) = (1, 1, 1, 1)`, whose moment vector leaves the
/// log-concave cone by `t = 1/10`.
pub fn frozen_counterexample() -> (WeightSequence, SparsePoly, Rational) {
    let b = WeightSequence::new(vec![int(1), int(1), int(3), int(3)]).expect("positive weights");
    // a_i = 1 / (b_i i!)
    let a: Vec<Rational> = b
        .b
        .iter()
        .enumerate()
        .map(|(i, bi)| (bi * Rational::from_integer(factorial(i as u32))).recip())
        .collect();
    let p = SparsePoly::univariate(&a).expect("positive coefficients");
    (b, p, rat(1, 10))
}

/// A random strictly positive log-concave vector: `d_i = d_0 prod_{j <= i} rho_j`
/// with nonincreasing ratios `rho_j`.
pub fn random_lc_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    let mut ratios: Vec<Rational> = (1..len).map(|_| rat(rng.gen_range(1..=64), 16)).collect();
    ratios.sort_by(|a, b| b.cmp(a));
    let mut d = vec![rat(rng.gen_range(1..=64), 8)];
    for r in ratios {
        let next = d.last().unwrap() * r;
        d.push(next);
    }
    d
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepViolation {
    pub input: Vec<String>,
    pub output: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteStepReport {
    pub trials: usize,
    pub violations: usize,
    /// The first few violating inputs, in trial order.
    pub examples: Vec<StepViolation>,
}

/// Applies `I + t Shift_c` to random log-concave vectors and counts the
/// outputs that leave the cone.
pub fn discrete_step_check(s: &ShiftOperator, t: &Rational, trials: usize, seed: u64) -> Result<DiscreteStepReport> {
    if !t.is_positive() {
        return Err(Error::InvalidArgument("step length must be positive".into()));
    }
    let mut gen = rng::stream(seed, "discrete-step");
    let mut violations = 0;
    let mut examples = Vec::new();
    for _ in 0..trials {
        let d = random_lc_vector(&mut gen, s.dim());
        let out = s.step(t, &d)?;
        if !lc_member(&out) {
            violations += 1;
            if examples.len() < 5 {
                examples.push(StepViolation {
                    input: d.iter().map(format_rational).collect(),
                    output: out.iter().map(format_rational).collect(),
                });
            }
        }
    }
    Ok(DiscreteStepReport {
        trials,
        violations,
        examples,
    })
}

/// The unit monomial `t^k` as a univariate polynomial.
pub fn power(k: u32) -> SparsePoly {
    SparsePoly::monomial(MultiIndex::new(vec![k]), Rational::one())
}
