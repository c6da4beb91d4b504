use crate::Scalar;

use super::{LinalgError, Matrix};

/// Dense symmetric matrix. Every constructor mirrors one triangle, so
/// `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be positive");
        Self {
            inner: Matrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![T::one(); dim])
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut s = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            s.inner[(i, i)] = d;
        }
        s
    }

    /// Builds from the lower triangle: `f(i, j)` is called only for `i >= j`.
    pub fn from_lower(dim: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut s = Self::zeros(dim);
        for j in 0..dim {
            for i in j..dim {
                let v = f(i, j);
                s.inner[(i, j)] = v;
                s.inner[(j, i)] = v;
            }
        }
        s
    }

    /// Accepts a square matrix only if it is exactly symmetric.
    pub fn try_from_matrix(m: Matrix<T>) -> Result<Self, LinalgError> {
        let n = m.rows();
        if n == 0 || m.cols() != n {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        for j in 0..n {
            for i in j + 1..n {
                if m[(i, j)] != m[(j, i)] {
                    return Err(LinalgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { inner: m })
    }

    /// Symmetric part `(m + mᵀ) / 2` of a square matrix.
    pub fn symmetrize(m: &Matrix<T>) -> Result<Self, LinalgError> {
        let n = m.rows();
        if n == 0 || m.cols() != n {
            return Err(LinalgError::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let half = T::c(0.5);
        Ok(Self::from_lower(n, |i, j| (m[(i, j)] + m[(j, i)]) * half))
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, LinalgError> {
        Self::try_from_matrix(Matrix::from_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.inner[(i, j)]
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn max_abs(&self) -> T {
        self.inner.max_abs()
    }

    pub fn trace(&self) -> T {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `self + c·I`.
    pub fn add_diagonal(&self, c: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.inner[(i, i)] = out.inner[(i, i)] + c;
        }
        out
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, c: T, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self::from_lower(self.dim(), |i, j| self.get(i, j) + c * other.get(i, j))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        Self::from_lower(self.dim(), |i, j| self.get(i, j) + other.get(i, j))
    }

    pub fn scale(&self, c: T) -> Self {
        Self::from_lower(self.dim(), |i, j| c * self.get(i, j))
    }

    /// Adds `c·v·vᵀ` in place.
    pub fn add_outer(&mut self, c: T, v: &[T]) {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length");
        for j in 0..n {
            let cvj = c * v[j];
            for i in j..n {
                let x = self.inner[(i, j)] + v[i] * cvj;
                self.inner[(i, j)] = x;
                self.inner[(j, i)] = x;
            }
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.dim();
        let mut out = vec![T::zero(); n];
        for (j, &vj) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.inner.column(j)) {
                *o = *o + a * vj;
            }
        }
        out
    }

    pub fn cast<U: Scalar>(&self) -> SymMatrix<U> {
        SymMatrix {
            inner: self.inner.cast(),
        }
    }
}

/// Lower-triangular factor produced by [`cholesky`](super::cholesky).
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular<T> {
    pub(super) inner: Matrix<T>,
}

impl<T: Scalar> LowerTriangular<T> {
    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    /// Solves `L·y = b` in place by forward substitution.
    pub fn solve_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for j in 0..n {
            let yj = b[j] / self.inner[(j, j)];
            b[j] = yj;
            let col = self.inner.column(j);
            for i in j + 1..n {
                b[i] = b[i] - col[i] * yj;
            }
        }
    }

    /// Solves `Lᵀ·x = b` in place by back substitution.
    pub fn solve_transposed_in_place(&self, b: &mut [T]) {
        let n = self.dim();
        for i in (0..n).rev() {
            let col = self.inner.column(i);
            let s = (i + 1..n).fold(b[i], |s, k| s - col[k] * b[k]);
            b[i] = s / col[i];
        }
    }
}
