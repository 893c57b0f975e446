//! `f(x) = exp(a_1 x_1 + ... + a_m x_m)`, the one non-polynomial test
//! function. Everything about it has a closed form.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{format_rational, ln_rational, pow_rational, Rational};
use crate::poly::MultiIndex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpLinearFixture {
    coeffs: Vec<Rational>,
}

impl ExpLinearFixture {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("need at least one variable".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_positive()) {
            return Err(Error::InvalidArgument(format!(
                "exponential coefficients must be positive, got {}",
                format_rational(c)
            )));
        }
        Ok(ExpLinearFixture { coeffs })
    }

    pub fn num_vars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn check(&self, r: &MultiIndex) -> Result<()> {
        if r.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                found: r.len(),
            });
        }
        Ok(())
    }

    /// `Der_f(R) = prod a_i^{r_i}`.
    pub fn der_at_zero(&self, r: &MultiIndex) -> Result<Rational> {
        self.check(r)?;
        Ok(self
            .coeffs
            .iter()
            .zip(r.entries())
            .fold(Rational::one(), |acc, (a, &ri)| acc * pow_rational(a, ri as i64)))
    }

    /// `log C_f(R) = sum r_i (1 + log a_i)`; the per-coordinate infimum of
    /// `e^{a x} (r/x)^r` sits at `x = r/a`.
    pub fn log_c_f(&self, r: &MultiIndex) -> Result<f64> {
        self.check(r)?;
        Ok(self
            .coeffs
            .iter()
            .zip(r.entries())
            .map(|(a, &ri)| ri as f64 * (1.0 + ln_rational(a)))
            .sum())
    }

    pub fn c_f(&self, r: &MultiIndex) -> Result<f64> {
        Ok(self.log_c_f(r)?.exp())
    }

    /// `Cap(f) = prod (e a_i)`.
    pub fn capacity(&self) -> f64 {
        self.c_f(&MultiIndex::ones(self.num_vars()))
            .expect("dimension matches")
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.coeffs.len(),
                found: x.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .map(|(a, xi)| crate::numeric::to_f64(a) * xi)
            .sum::<f64>()
            .exp())
    }
}

#[derive(Serialize)]
struct ExpLinearJson {
    exp_linear: Vec<String>,
}

impl Serialize for ExpLinearFixture {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ExpLinearJson {
            exp_linear: self.coeffs.iter().map(format_rational).collect(),
        }
        .serialize(s)
    }
}
