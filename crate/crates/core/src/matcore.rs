//! Dense complex matrices and density matrices.
//!
//! Storage is row-major. The Kronecker product uses the block convention
//! `(a ⊗ b)[i·rb + k, j·cb + l] = a[i, j] · b[k, l]`, so a multi-party basis
//! index is the mixed-radix number whose most significant digit belongs to the
//! first party.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{re, Real, C};

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C::one();
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|&x| re(T::lit(x)))
            })
            .collect();
        Self {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = re(v);
        }
        m
    }

    /// Outer product `|v⟩⟨v|`.
    pub fn projector(v: &[C<T>]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C<T>> {
        self.data
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> C<T> {
        (0..self.rows.min(self.cols)).fold(C::zero(), |acc, i| acc + self[(i, i)])
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] = out.data[i * other.cols + j] + a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C<T>> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "trace of {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = C::zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc = acc + self[(i, k)] * other[(k, i)];
            }
        }
        Ok(acc)
    }
}

impl<T: Real> Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in add"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in sub"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    fn mul(self, rhs: Self) -> Matrix<T> {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let (rb, cb) = (b.rows, b.cols);
    let mut out = Matrix::zeros(a.rows * rb, a.cols * cb);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a nonempty list of factors, left to right.
pub fn tensor_product_all<T: Real>(factors: &[&Matrix<T>]) -> Matrix<T> {
    let (first, rest) = factors.split_first().expect("at least one factor");
    rest.iter()
        .fold((*first).clone(), |acc, f| tensor_product(&acc, f))
}

/// Hilbert–Schmidt inner product `Tr(a† b)`.
pub fn hs_inner<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<C<T>> {
    if !a.is_square() || !b.is_square() || a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "hs_inner of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.data
        .iter()
        .zip(&b.data)
        .fold(C::zero(), |acc, (x, y)| acc + x.conj() * *y))
}

/// Spectrum of a Hermitian matrix, ascending.
///
/// The `n×n` Hermitian `A = X + iY` is embedded as the real symmetric
/// `[[X, −Y], [Y, X]]`, whose spectrum is that of `A` with every eigenvalue
/// doubled; the doubled spectrum is diagonalized by cyclic Jacobi rotations.
pub fn hermitian_eigenvalues<T: Real>(a: &Matrix<T>) -> Result<Vec<T>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let dev = a.hermiticity_deviation();
    let scale = T::one().max(max_modulus(a));
    if dev > T::input_tol() * scale {
        return Err(Error::NotHermitian {
            deviation: dev.as_f64(),
        });
    }
    let n = a.rows;
    let m = 2 * n;
    let mut s = vec![T::zero(); m * m];
    for i in 0..n {
        for j in 0..n {
            // symmetrize so the embedding is exactly symmetric
            let z = (a[(i, j)] + a[(j, i)].conj()) * T::lit(0.5);
            s[i * m + j] = z.re;
            s[(i + n) * m + (j + n)] = z.re;
            s[(i + n) * m + j] = z.im;
            s[i * m + (j + n)] = -z.im;
        }
    }
    let mut doubled = jacobi_symmetric_eigenvalues(&mut s, m);
    doubled.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(doubled
        .chunks(2)
        .map(|pair| (pair[0] + pair[1]) * T::lit(0.5))
        .collect())
}

pub fn min_eigenvalue<T: Real>(a: &Matrix<T>) -> Result<T> {
    Ok(hermitian_eigenvalues(a)?[0])
}

fn max_modulus<T: Real>(a: &Matrix<T>) -> T {
    a.data.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

/// Cyclic Jacobi on a dense symmetric `n×n` row-major matrix, destroyed in place.
fn jacobi_symmetric_eigenvalues<T: Real>(a: &mut [T], n: usize) -> Vec<T> {
    let frob2: T = a.iter().fold(T::zero(), |acc, &x| acc + x * x);
    let eps = T::epsilon();
    let target = eps * eps * frob2 * T::lit(1e-2);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off + a[p * n + q] * a[p * n + q];
            }
        }
        if off <= target || off.is_zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.is_zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let cs = T::one() / (t * t + T::one()).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Mixed-radix digits of `index` for the given subsystem dimensions.
pub(crate) fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

pub(crate) fn undigits(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

/// Partial transpose of a square matrix over the subsystem `block`.
pub fn partial_transpose_matrix<T: Real>(
    m: &Matrix<T>,
    dims: &[usize],
    block: usize,
) -> Result<Matrix<T>> {
    if block >= dims.len() {
        return Err(Error::IndexOutOfRange {
            index: block,
            parties: dims.len(),
        });
    }
    let side: usize = dims.iter().product();
    if m.rows != side || m.cols != side {
        return Err(Error::Shape(format!(
            "dims {dims:?} need side {side}, matrix is {}x{}",
            m.rows, m.cols
        )));
    }
    let mut out = Matrix::zeros(side, side);
    let mut ri = vec![0; dims.len()];
    let mut ci = vec![0; dims.len()];
    for r in 0..side {
        digits(r, dims, &mut ri);
        for c in 0..side {
            digits(c, dims, &mut ci);
            std::mem::swap(&mut ri[block], &mut ci[block]);
            out[(undigits(&ri, dims), undigits(&ci, dims))] = m[(r, c)];
            std::mem::swap(&mut ri[block], &mut ci[block]);
        }
    }
    Ok(out)
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidPermutation(perm.to_vec()));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::InvalidPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Reorders tensor factors: factor `k` of the result is factor `perm[k]` of the input.
pub fn permute_subsystems_matrix<T: Real>(
    m: &Matrix<T>,
    dims: &[usize],
    perm: &[usize],
) -> Result<(Matrix<T>, Vec<usize>)> {
    check_permutation(perm, dims.len())?;
    let side: usize = dims.iter().product();
    if m.rows != side || m.cols != side {
        return Err(Error::Shape(format!(
            "dims {dims:?} need side {side}, matrix is {}x{}",
            m.rows, m.cols
        )));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    // old index -> new index
    let mut map = vec![0; side];
    let mut old = vec![0; dims.len()];
    let mut new = vec![0; dims.len()];
    for (i, slot) in map.iter_mut().enumerate() {
        digits(i, dims, &mut old);
        for (k, &p) in perm.iter().enumerate() {
            new[k] = old[p];
        }
        *slot = undigits(&new, &new_dims);
    }
    let mut out = Matrix::zeros(side, side);
    for r in 0..side {
        for c in 0..side {
            out[(map[r], map[c])] = m[(r, c)];
        }
    }
    Ok((out, new_dims))
}

/// Hermitian, unit-trace, positive semidefinite matrix over a list of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct Density<T: Real> {
    dims: Vec<usize>,
    matrix: Matrix<T>,
}

impl<T: Real> Density<T> {
    /// Validates at the input tolerance (external data).
    pub fn new(dims: Vec<usize>, matrix: Matrix<T>) -> Result<Self> {
        Self::with_tolerance(dims, matrix, T::input_tol())
    }

    /// Validates at the internal tolerance (objects built by this crate).
    pub(crate) fn constructed(dims: Vec<usize>, matrix: Matrix<T>) -> Result<Self> {
        Self::with_tolerance(dims, matrix, T::internal_tol())
    }

    pub fn with_tolerance(dims: Vec<usize>, matrix: Matrix<T>, tol: T) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Shape(format!(
                "subsystem dimensions must be >= 2, got {dims:?}"
            )));
        }
        let side: usize = dims.iter().product();
        if matrix.rows != side || matrix.cols != side {
            return Err(Error::Shape(format!(
                "dims {dims:?} multiply to {side} but matrix is {}x{}",
                matrix.rows, matrix.cols
            )));
        }
        let dev = matrix.hermiticity_deviation();
        if dev > tol {
            return Err(Error::NotHermitian {
                deviation: dev.as_f64(),
            });
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
            return Err(Error::TraceViolation {
                trace: tr.re.as_f64(),
            });
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue: min.as_f64(),
            });
        }
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn side(&self) -> usize {
        self.matrix.rows
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> T {
        self.matrix
            .data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    /// Entrywise complex conjugate `ρ*`, again a density matrix.
    pub fn conj(&self) -> Self {
        Self {
            dims: self.dims.clone(),
            matrix: self.matrix.conj(),
        }
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix).expect("validated Hermitian")
    }

    /// `self ⊗ other` with concatenated subsystem lists.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            matrix: tensor_product(&self.matrix, &other.matrix),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ` of states sharing the same dims.
    pub fn mixture(parts: &[(T, &Self)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::Shape("empty mixture".into()))?;
        let mut acc = Matrix::zeros(first.side(), first.side());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::DimensionMismatch(
                    "mixture of states with different dims".into(),
                ));
            }
            acc = &acc + &rho.matrix.scale(*w);
        }
        Self::constructed(first.dims.clone(), acc)
    }

    pub fn partial_transpose(&self, block: usize) -> Result<Matrix<T>> {
        partial_transpose_matrix(&self.matrix, &self.dims, block)
    }

    pub fn permute_subsystems(&self, perm: &[usize]) -> Result<Self> {
        let (matrix, dims) = permute_subsystems_matrix(&self.matrix, &self.dims, perm)?;
        Ok(Self { dims, matrix })
    }

    /// Same matrix, reinterpreted over a coarser factorization.
    pub fn regroup(&self, dims: Vec<usize>) -> Result<Self> {
        let side: usize = dims.iter().product();
        if side != self.side() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Shape(format!(
                "cannot regroup side {} as {dims:?}",
                self.side()
            )));
        }
        Ok(Self {
            dims,
            matrix: self.matrix.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type M = Matrix<f64>;

    fn sx() -> M {
        M::from_real_rows(&[&[0., 1.], &[1., 0.]])
    }

    fn sy() -> M {
        M::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
    }

    fn sz() -> M {
        M::diagonal(&[1., -1.])
    }

    #[test]
    fn kron_identities_and_projectors() {
        assert_eq!(
            tensor_product(&M::identity(2), &M::identity(2)),
            M::identity(4)
        );
        let p = tensor_product(&M::diagonal(&[1., 0.]), &M::diagonal(&[0., 1.]));
        assert_eq!(p, M::diagonal(&[0., 1., 0., 0.]));
        let xx = tensor_product(&sx(), &sx());
        assert_eq!(xx[(0, 3)], c(1., 0.));
        assert_eq!(xx[(0, 0)], c(0., 0.));
    }

    #[test]
    fn kron_block_convention() {
        let a = M::from_real_rows(&[&[1., 2.], &[3., 4.]]);
        let b = M::from_real_rows(&[&[0., 5.], &[6., 7.]]);
        let k = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..2 {
                    for s in 0..2 {
                        assert_eq!(k[(i * 2 + r, j * 2 + s)], a[(i, j)] * b[(r, s)]);
                    }
                }
            }
        }
    }

    #[test]
    fn hs_inner_examples() {
        assert_eq!(
            hs_inner(&M::identity(2), &M::identity(2)).unwrap(),
            c(2., 0.)
        );
        let r = 1.0 / 2f64.sqrt();
        let v = hs_inner(&sx().scale(r), &sy().scale(r)).unwrap();
        assert!(v.norm() < 1e-15);
        let a = M::from_real_rows(&[&[1., 2.], &[0., 1.]]);
        assert_eq!(hs_inner(&a, &a).unwrap(), c(6., 0.));
        assert!(matches!(
            hs_inner(&M::identity(2), &M::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn eigenvalue_examples() {
        let e = hermitian_eigenvalues(&M::identity(3)).unwrap();
        assert_eq!(e.len(), 3);
        assert!(e.iter().all(|x| (x - 1.0).abs() < 1e-14));
        let e = hermitian_eigenvalues(&sz()).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
        let e = hermitian_eigenvalues(&M::from_real_rows(&[&[2., 1.], &[1., 2.]])).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
        let e = hermitian_eigenvalues(&sy()).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-14 && (e[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_reject_non_hermitian() {
        let a = M::from_real_rows(&[&[1., 2.], &[0., 1.]]);
        assert!(matches!(
            hermitian_eigenvalues(&a),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_eigenvalues(&M::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    fn bell() -> Density<f64> {
        let h = 0.5;
        let m = M::from_real_rows(&[
            &[h, 0., 0., h],
            &[0., 0., 0., 0.],
            &[0., 0., 0., 0.],
            &[h, 0., 0., h],
        ]);
        Density::new(vec![2, 2], m).unwrap()
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let pt = bell().partial_transpose(1).unwrap();
        let e = hermitian_eigenvalues(&pt).unwrap();
        let want = [-0.5, 0.5, 0.5, 0.5];
        for (x, w) in e.iter().zip(want) {
            assert!((x - w).abs() < 1e-13, "{e:?}");
        }
    }

    #[test]
    fn partial_transpose_product_and_diagonal() {
        let a = M::from_vec(
            2,
            2,
            vec![c(0.7, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.)],
        )
        .unwrap();
        let b = M::from_vec(
            2,
            2,
            vec![c(0.4, 0.), c(0.0, 0.3), c(0.0, -0.3), c(0.6, 0.)],
        )
        .unwrap();
        let rho = Density::new(vec![2, 2], tensor_product(&a, &b)).unwrap();
        assert_eq!(
            rho.partial_transpose(1).unwrap(),
            tensor_product(&a, &b.transpose())
        );
        let diag = Density::new(vec![2, 2], M::diagonal(&[0.1, 0.2, 0.3, 0.4])).unwrap();
        assert_eq!(&diag.partial_transpose(0).unwrap(), diag.matrix());
        assert!(matches!(
            diag.partial_transpose(2),
            Err(Error::IndexOutOfRange {
                index: 2,
                parties: 2
            })
        ));
    }

    #[test]
    fn permute_swaps_factors() {
        let a = Density::new(vec![2], M::diagonal(&[0.25, 0.75])).unwrap();
        let b = Density::new(vec![3], M::diagonal(&[0.5, 0.3, 0.2])).unwrap();
        let ab = a.tensor(&b);
        let ba = b.tensor(&a);
        assert_eq!(ab.permute_subsystems(&[0, 1]).unwrap(), ab);
        assert_eq!(ab.permute_subsystems(&[1, 0]).unwrap(), ba);
        assert_eq!(
            ab.permute_subsystems(&[1, 0])
                .unwrap()
                .permute_subsystems(&[1, 0])
                .unwrap(),
            ab
        );
        assert!(matches!(
            ab.permute_subsystems(&[0, 0]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            ab.permute_subsystems(&[0]),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn density_validation() {
        assert!(matches!(
            Density::new(vec![2], M::diagonal(&[0.5, 0.4])),
            Err(Error::TraceViolation { .. })
        ));
        assert!(matches!(
            Density::new(vec![2], M::diagonal(&[1.5, -0.5])),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            Density::new(vec![2, 2], M::identity(2)),
            Err(Error::Shape(_))
        ));
        let bad = M::from_real_rows(&[&[0.5, 0.1], &[0.0, 0.5]]);
        assert!(matches!(
            Density::new(vec![2], bad),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn single_precision_instantiation() {
        let m: Matrix<f32> = Matrix::from_real_rows(&[&[2., 1.], &[1., 2.]]);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-6 && (e[1] - 3.0).abs() < 1e-6);
    }
}
