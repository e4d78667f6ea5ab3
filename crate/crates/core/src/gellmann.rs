//! Generalized Gell-Mann basis of traceless Hermitian matrices.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::{c, re, Real};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 64;

/// Orthonormal basis `{F_α}` of the traceless Hermitian `d×d` matrices
/// together with their sum `F = Σ_α F_α`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis<T: Real> {
    dim: usize,
    elements: Vec<Matrix<T>>,
    sum: Matrix<T>,
}

impl<T: Real> OperatorBasis<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Matrix<T>] {
        &self.elements
    }

    pub fn sum(&self) -> &Matrix<T> {
        &self.sum
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(d))
    }
}

/// Builds the `d² − 1` generalized Gell-Mann matrices, normalized to
/// `Tr(F_α F_β) = δ_αβ`.
///
/// Order: symmetric `(|j⟩⟨k| + |k⟩⟨j|)/√2` for `j < k` (lexicographic), then
/// antisymmetric `−i(|j⟩⟨k| − |k⟩⟨j|)/√2` in the same order, then diagonal
/// `D_l` for `l = 1..d−1`.
pub fn gellmann_basis<T: Real>(d: usize) -> Result<OperatorBasis<T>> {
    check_dim(d)?;
    let inv_sqrt2 = T::FRAC_1_SQRT_2();
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| ((j + 1)..d).map(move |k| (j, k)))
        .collect();
    let mut elements = Vec::with_capacity(d * d - 1);
    for &(j, k) in &pairs {
        let mut m = Matrix::zeros(d, d);
        m[(j, k)] = re(inv_sqrt2);
        m[(k, j)] = re(inv_sqrt2);
        elements.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = Matrix::zeros(d, d);
        m[(j, k)] = c(T::zero(), -inv_sqrt2);
        m[(k, j)] = c(T::zero(), inv_sqrt2);
        elements.push(m);
    }
    for l in 1..d {
        let lt = T::from_usize_exact(l);
        let norm = (lt * (lt + T::one())).sqrt().recip();
        let mut m = Matrix::zeros(d, d);
        for i in 0..l {
            m[(i, i)] = re(norm);
        }
        m[(l, l)] = re(-lt * norm);
        elements.push(m);
    }
    let mut sum = Matrix::zeros(d, d);
    for e in &elements {
        for i in 0..d {
            for j in 0..d {
                let z = e[(i, j)];
                if !z.is_zero() {
                    sum[(i, j)] = sum[(i, j)] + z;
                }
            }
        }
    }
    Ok(OperatorBasis {
        dim: d,
        elements,
        sum,
    })
}
