//! The constants appearing in the bounds: `vdw(n) = n!/n^n`,
//! `VDW(Y) = prod vdw(r_i)`, `g(k) = ((k-1)/k)^{k-1}`, the Schrijver factor,
//! and `L(n) = (inf_{t>0} exp_n(t)/t)^{-1}` where `exp_n` is the degree-`n`
//! Taylor polynomial of `e^t`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::numeric::{format_rational, pow_rational, rat, to_f64, vdw, Rational};
use crate::poly::MultiIndex;

/// `prod_i vdw(r_i)`.
pub fn vdw_product(r: &MultiIndex) -> Rational {
    r.entries().iter().map(|&ri| vdw(ri)).product()
}

/// `((k-1)/k)^{k-1}`, with `g(1) = 1`.
pub fn g(k: u32) -> Rational {
    assert!(k >= 1, "g is defined for k >= 1");
    pow_rational(&rat(k as i64 - 1, k as i64), k as i64 - 1)
}

/// `((k-1)/k)^{(k-1)(n-k)} vdw(k)`.
pub fn schrijver_constant(k: u32, n: u32) -> Rational {
    assert!(1 <= k && k <= n, "need 1 <= k <= n");
    pow_rational(&rat(k as i64 - 1, k as i64), ((k - 1) * (n - k)) as i64) * vdw(k)
}

/// `exp_n(t)` exactly.
pub fn exp_taylor(n: u32, t: &Rational) -> Rational {
    let mut acc = Rational::zero();
    let mut term = Rational::one();
    for j in 0..=n {
        if j > 0 {
            term = term * t / Rational::from_integer(j.into());
        }
        acc += &term;
    }
    acc
}

fn exp_taylor_f64(n: u32, t: f64) -> f64 {
    let mut acc = 0.0;
    let mut term = 1.0;
    for j in 0..=n {
        if j > 0 {
            term *= t / j as f64;
        }
        acc += term;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    /// Minimizer of `exp_n(t)/t`; infinite for `n = 1`.
    pub argmin: f64,
}

/// `L(n)` with a bracket of width about `1e-12`.
///
/// `exp_n(t)/t` is convex on `t > 0`; its derivative vanishes where
/// `h(t) = -1 + sum_{j=1}^n (j-1) t^j / j!` does, and `h` is increasing.
/// Bisection on `h` localizes the minimizer to `[lo, hi]`, and convexity
/// bounds the minimum between the tangent line at `lo` evaluated at `hi` and
/// the smaller endpoint value.
pub fn compute_l(n: u32) -> LValue {
    assert!(n >= 1, "L is defined for n >= 1");
    if n == 1 {
        // (1 + t)/t decreases to 1
        return LValue {
            value: 1.0,
            lower: 1.0,
            upper: 1.0,
            argmin: f64::INFINITY,
        };
    }
    let h = |t: f64| -> f64 {
        let mut s = -1.0;
        let mut pow_over_fact = 1.0;
        for j in 1..=n {
            pow_over_fact *= t / j as f64;
            s += (j - 1) as f64 * pow_over_fact;
        }
        s
    };
    let (mut lo, mut hi) = (0.0, n as f64 + 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if h(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ratio = |t: f64| exp_taylor_f64(n, t) / t;
    // d/dt (exp_n(t)/t) = h(t) / t^2
    let slope = h(lo) / (lo * lo);
    let upper_min = ratio(lo).min(ratio(hi));
    let lower_min = ratio(lo) + slope * (hi - lo);
    let t = 0.5 * (lo + hi);
    LValue {
        value: 1.0 / ratio(t),
        lower: 1.0 / upper_min,
        upper: 1.0 / lower_min,
        argmin: t,
    }
}

/// `1 / exp_n(1)`: a rational lower bound for `L(n)` (take `t = 1` in the
/// infimum) that already exceeds `1/e`.
pub fn l_lower_certificate(n: u32) -> Rational {
    exp_taylor(n, &Rational::one()).recip()
}

/// `prod_{i=1}^n L(i)`.
pub fn l_product(n: u32) -> f64 {
    (1..=n).map(|i| compute_l(i).value).product()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsRow {
    pub n: u32,
    pub vdw: String,
    pub vdw_value: f64,
    pub g: String,
    pub g_value: f64,
    pub l: LValue,
}

/// Rows `1..=max_n` of the constants table.
pub fn constants_table(max_n: u32) -> Vec<ConstantsRow> {
    (1..=max_n)
        .map(|n| ConstantsRow {
            n,
            vdw: format_rational(&vdw(n)),
            vdw_value: to_f64(&vdw(n)),
            g: format_rational(&g(n)),
            g_value: to_f64(&g(n)),
            l: compute_l(n),
        })
        .collect()
}

/// `vdw(n) = prod_{k=2}^n g(k)`, the identity behind the homogeneous bound.
pub fn vdw_from_g(n: u32) -> Rational {
    (2..=n).map(g).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    #[test]
    fn small_values() {
        assert_eq!(g(1), int(1));
        assert_eq!(g(2), rat(1, 2));
        assert_eq!(g(3), rat(4, 9));
        assert_eq!(vdw_product(&MultiIndex::new(vec![2, 0, 3])), rat(1, 2) * rat(2, 9));
        assert_eq!(schrijver_constant(2, 4), rat(1, 8));
        assert_eq!(schrijver_constant(3, 3), vdw(3));
        for n in 1..10 {
            assert_eq!(vdw_from_g(n), vdw(n));
        }
    }

    #[test]
    fn l_values() {
        assert_eq!(compute_l(1).value, 1.0);
        let l2 = compute_l(2);
        let expect = 1.0 / (1.0 + 2f64.sqrt());
        assert!((l2.value - expect).abs() < 1e-12);
        assert!(l2.lower <= expect + 1e-15 && expect <= l2.upper + 1e-15);
        assert!(l2.upper - l2.lower < 1e-11);
        for n in 2..=50 {
            let l = compute_l(n);
            // float cannot separate L(n) from 1/e beyond n ~ 18; the exact
            // chain 1/e < 1/exp_{n+1}(1) < 1/exp_n(1) <= L(n) does
            assert!(l.value >= (-1f64).exp() * (1.0 - 1e-15));
            assert!(l_lower_certificate(n) > l_lower_certificate(n + 1));
            assert!(to_f64(&l_lower_certificate(n)) <= l.upper * (1.0 + 1e-14));
        }
    }
}
