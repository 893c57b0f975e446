//! Dense univariate polynomials over the rationals, enough for Sturm chains.

use num_traits::{Signed, Zero};

use crate::numeric::Rational;

/// Coefficients low to high, no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct UniPoly(Vec<Rational>);

impl UniPoly {
    pub(crate) fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with the zero polynomial at `None`.
    pub(crate) fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &Rational {
        self.0.last().expect("nonzero polynomial")
    }

    fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(i.into()))
                .collect(),
        )
    }

    fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut rem = self.0.clone();
        let mut quo = vec![Rational::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap() / d.lead();
            for (i, c) in d.0.iter().enumerate() {
                rem[k + i] -= &f * c;
            }
            quo[k] = f;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::new(quo), UniPoly::new(rem))
    }

    fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub(crate) fn square_free(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.clone();
        }
        self.div_rem(&g).0
    }

    fn sign_at_pos_infinity(&self) -> i8 {
        if self.lead().is_positive() {
            1
        } else {
            -1
        }
    }

    fn sign_at_neg_infinity(&self) -> i8 {
        let s = self.sign_at_pos_infinity();
        if self.degree().unwrap().is_multiple_of(2) {
            s
        } else {
            -s
        }
    }

    /// Number of distinct real roots, from the Sturm chain's sign changes
    /// at `-inf` and `+inf`.
    pub(crate) fn distinct_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        let changes = |signs: Vec<i8>| signs.windows(2).filter(|w| w[0] != w[1]).count();
        changes(chain.iter().map(UniPoly::sign_at_neg_infinity).collect())
            - changes(chain.iter().map(UniPoly::sign_at_pos_infinity).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::int;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&v| int(v)).collect())
    }

    #[test]
    fn root_counts() {
        assert_eq!(up(&[2, 3, 1]).distinct_real_roots(), 2);
        assert_eq!(up(&[1, 1, 1]).distinct_real_roots(), 0);
        assert_eq!(up(&[-1, 0, 0, 1]).distinct_real_roots(), 1);
        assert_eq!(up(&[0, -1, 0, 1]).distinct_real_roots(), 3);
        assert_eq!(up(&[5]).distinct_real_roots(), 0);
    }

    #[test]
    fn square_free_part() {
        // (t + 1)^2 (t + 2)
        let p = up(&[2, 5, 4, 1]);
        let s = p.square_free();
        assert_eq!(s.degree(), Some(2));
        assert_eq!(s.distinct_real_roots(), 2);
    }
}
