//! Exact rank of direction sets and a float orthonormal basis of their span.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::Zero;

use crate::numeric::{to_f64, Rational};

/// Incremental row-echelon basis over the rationals.
pub(crate) struct EchelonBasis {
    rows: Vec<(usize, Vec<Rational>)>,
    dim: usize,
}

impl EchelonBasis {
    pub(crate) fn new(dim: usize) -> Self {
        EchelonBasis {
            rows: Vec::new(),
            dim,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was.
    pub(crate) fn insert(&mut self, v: &[Rational]) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let f = w[*pivot].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                if !ri.is_zero() {
                    *wi -= &f * ri;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = w[p].recip();
                for x in w.iter_mut() {
                    *x *= &inv;
                }
                self.rows.push((p, w));
                true
            }
        }
    }
}

pub(crate) fn exact_rank<'a, I>(dim: usize, vectors: I, cap: usize) -> usize
where
    I: IntoIterator<Item = &'a Vec<Rational>>,
{
    let mut basis = EchelonBasis::new(dim);
    for v in vectors {
        basis.insert(v);
        if basis.rank() >= cap {
            break;
        }
    }
    basis.rank()
}

/// Orthonormal `dim x rank` basis of the span of `vectors` (whose exact rank
/// is known), from the dominant eigenvectors of the scatter matrix.
pub(crate) fn orthonormal_basis(dim: usize, vectors: &[Vec<Rational>], rank: usize) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(dim, 0);
    }
    let mut scatter = DMatrix::<f64>::zeros(dim, dim);
    for v in vectors {
        let f: Vec<f64> = v.iter().map(to_f64).collect();
        let norm2: f64 = f.iter().map(|x| x * x).sum();
        if norm2 == 0.0 {
            continue;
        }
        for i in 0..dim {
            for j in 0..dim {
                scatter[(i, j)] += f[i] * f[j] / norm2;
            }
        }
    }
    let eig = SymmetricEigen::new(scatter);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut basis = DMatrix::<f64>::zeros(dim, rank);
    for (k, &col) in order.iter().take(rank).enumerate() {
        basis.set_column(k, &eig.eigenvectors.column(col));
    }
    basis
}
