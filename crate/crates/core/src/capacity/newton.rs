//! Damped Newton for `phi(z) = log sum_s exp(c_s + <v_s, z>)`.
//!
//! The Hessian of a log-sum-exp is the covariance of the `v_s` under the
//! softmax weights, so it is formed directly as `sum p_s (v_s - g)(v_s - g)^T`
//! and stays positive semidefinite in floating point.

use nalgebra::{DMatrix, DVector};

use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, Copy)]
pub(crate) struct NewtonSettings {
    pub max_iterations: usize,
    pub tolerance: f64,
    pub armijo: f64,
    pub ridge: f64,
}

pub(crate) struct LogSumExp {
    /// one row per term
    dirs: DMatrix<f64>,
    offsets: Vec<f64>,
}

pub(crate) struct Evaluation {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

pub(crate) struct Outcome {
    pub z: DVector<f64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl LogSumExp {
    pub(crate) fn new(dirs: DMatrix<f64>, offsets: Vec<f64>) -> Self {
        debug_assert_eq!(dirs.nrows(), offsets.len());
        LogSumExp { dirs, offsets }
    }

    pub(crate) fn dim(&self) -> usize {
        self.dirs.ncols()
    }

    fn exponents(&self, z: &DVector<f64>) -> Vec<f64> {
        let dz = &self.dirs * z;
        self.offsets.iter().zip(dz.iter()).map(|(c, d)| c + d).collect()
    }

    pub(crate) fn value(&self, z: &DVector<f64>) -> f64 {
        crate::poly::log_sum_exp(&self.exponents(z))
    }

    pub(crate) fn evaluate(&self, z: &DVector<f64>) -> Evaluation {
        let e = self.exponents(z);
        let max = e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = e.iter().map(|v| (v - max).exp()).collect();
        let total: CompensatedSum = w.iter().copied().collect();
        let total = total.value();
        let d = self.dim();
        let mut gradient = DVector::<f64>::zeros(d);
        for (row, wi) in self.dirs.row_iter().zip(&w) {
            gradient += row.transpose() * (wi / total);
        }
        let mut hessian = DMatrix::<f64>::zeros(d, d);
        for (row, wi) in self.dirs.row_iter().zip(&w) {
            let c = row.transpose() - &gradient;
            hessian.ger(wi / total, &c, &c, 1.0);
        }
        Evaluation {
            value: max + total.ln(),
            gradient,
            hessian,
        }
    }

    /// Minimizes from `z0`. `grad_norm` maps a reduced gradient to the norm
    /// used in the stopping rule, and `offset` is added to the objective
    /// before the relative tolerance is applied.
    pub(crate) fn minimize<F>(
        &self,
        z0: DVector<f64>,
        settings: NewtonSettings,
        offset: f64,
        grad_norm: F,
    ) -> Outcome
    where
        F: Fn(&DVector<f64>) -> f64,
    {
        let d = self.dim();
        let mut z = z0;
        let mut eval = self.evaluate(&z);
        let mut iterations = 0;
        loop {
            let gn = grad_norm(&eval.gradient);
            let threshold = settings.tolerance * (eval.value + offset).abs().max(1.0);
            if gn <= threshold {
                return Outcome {
                    z,
                    value: eval.value,
                    gradient_norm: gn,
                    iterations,
                    converged: true,
                };
            }
            if iterations >= settings.max_iterations {
                return Outcome {
                    z,
                    value: eval.value,
                    gradient_norm: gn,
                    iterations,
                    converged: false,
                };
            }
            iterations += 1;

            let regularized = &eval.hessian + DMatrix::<f64>::identity(d, d) * settings.ridge;
            let newton = regularized
                .cholesky()
                .map(|ch| -ch.solve(&eval.gradient))
                .filter(|step| step.iter().all(|v| v.is_finite()) && step.dot(&eval.gradient) < 0.0);
            let mut accepted = None;
            for step in newton.into_iter().chain(std::iter::once(-eval.gradient.clone())) {
                let slope = step.dot(&eval.gradient);
                let mut alpha = 1.0;
                for _ in 0..64 {
                    let trial = &z + &step * alpha;
                    let v = self.value(&trial);
                    if v <= eval.value + settings.armijo * alpha * slope {
                        accepted = Some(trial);
                        break;
                    }
                    alpha *= 0.5;
                }
                if accepted.is_some() {
                    break;
                }
            }
            match accepted {
                Some(next) => {
                    z = next;
                    eval = self.evaluate(&z);
                }
                None => {
                    // no descent possible at working precision
                    return Outcome {
                        z,
                        value: eval.value,
                        gradient_norm: gn,
                        iterations,
                        converged: false,
                    };
                }
            }
        }
    }
}
