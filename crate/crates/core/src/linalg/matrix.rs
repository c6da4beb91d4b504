use std::ops::{Index, IndexMut};

use crate::Scalar;

use super::LinalgError;

/// Dense column-major matrix.
///
/// Columns are contiguous, so a data matrix holding one sample per column
/// hands out each sample as a slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Wraps column-major storage. Panics if the length does not match.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "column-major buffer length");
        Self { rows, cols, data }
    }

    /// Builds a matrix from row slices; convenient for literals in tests.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        assert!(
            rows.iter().all(|r| r.as_ref().len() == ncols),
            "ragged rows"
        );
        Self::from_fn(nrows, ncols, |i, j| rows[i].as_ref()[j])
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[T]>>(rows: usize, columns: &[C]) -> Self {
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            assert_eq!(c.as_ref().len(), rows, "column length");
            data.extend_from_slice(c.as_ref());
        }
        Self {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn column_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Two distinct columns, mutably, in the order asked for.
    pub(crate) fn column_pair_mut(&mut self, p: usize, q: usize) -> (&mut [T], &mut [T]) {
        assert!(p != q, "column pair must be distinct");
        let r = self.rows;
        let (lo, hi) = (p.min(q), p.max(q));
        let (head, tail) = self.data.split_at_mut(hi * r);
        let (a, b) = (&mut head[lo * r..(lo + 1) * r], &mut tail[..r]);
        if p < q {
            (a, b)
        } else {
            (b, a)
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    /// Row-major nested vectors, the layout used by the JSON model format.
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for &j in idx {
            data.extend_from_slice(self.column(j));
        }
        Self {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Keeps the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        Self::from_col_major(self.rows, k, self.data[..self.rows * k].to_vec())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let rc = rhs.column(j);
            let oc = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (p, &r) in rc.iter().enumerate() {
                if r == T::zero() {
                    continue;
                }
                for (o, &a) in oc.iter_mut().zip(self.column(p)) {
                    *o = *o + a * r;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · rhs` without materializing the transpose.
    pub fn tr_matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        Ok(Self::from_fn(self.cols, rhs.cols, |i, j| {
            dot(self.column(i), rhs.column(j))
        }))
    }

    /// Largest absolute entry, `‖·‖_max`.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Elementwise `self - rhs`. Panics on shape mismatch.
    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| U::c(v.as_f64())).collect(),
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |s, (&x, &y)| s + x * y)
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Orthonormalizes the columns of `m` with two passes of modified
/// Gram–Schmidt.
///
/// Fails with [`LinalgError::RankDeficient`] when a column's remaining norm
/// after removing the previous directions drops below `tol` times its
/// original norm.
pub fn orthonormalize_columns<T: Scalar>(m: &Matrix<T>, tol: T) -> Result<Matrix<T>, LinalgError> {
    let mut q = m.clone();
    let rows = m.rows();
    for j in 0..m.cols() {
        let original = norm2(m.column(j));
        for _pass in 0..2 {
            for p in 0..j {
                let (head, tail) = q.data.split_at_mut(j * rows);
                let qp = &head[p * rows..(p + 1) * rows];
                let qj = &mut tail[..rows];
                let r = dot(qp, qj);
                for (x, &y) in qj.iter_mut().zip(qp) {
                    *x = *x - r * y;
                }
            }
        }
        let n = norm2(q.column(j));
        if !(original > T::zero()) || !(n >= tol * original) {
            return Err(LinalgError::RankDeficient { column: j });
        }
        for x in q.column_mut(j) {
            *x = *x / n;
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn column_major_layout() {
        let m = Matrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        assert_eq!(m.shape(), (3, 2));
        assert_eq!(m.column(1), &[2.0, 4.0, 6.0]);
        assert_eq!(m.row(2), vec![5.0, 6.0]);
        assert_eq!(m.transpose().column(0), &[1.0, 2.0]);
    }

    #[test]
    fn matmul_matches_hand_product() {
        let a = Matrix::<f64>::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let b = Matrix::<f64>::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let c = a.matmul(&b).unwrap();
        assert_eq!(c, Matrix::from_rows(&[[2.0, 1.0], [4.0, 3.0]]));
        assert_eq!(a.tr_matmul(&b).unwrap(), a.transpose().matmul(&b).unwrap());
        assert!(a.matmul(&Matrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn gram_schmidt_rejects_dependent_columns() {
        let m = Matrix::<f64>::from_rows(&[[1.0, 2.0], [1.0, 2.0]]);
        assert!(matches!(
            orthonormalize_columns(&m, 1e-10),
            Err(LinalgError::RankDeficient { column: 1 })
        ));
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let m = Matrix::<f64>::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [1.0, 0.0, 1.0]]);
        let q = orthonormalize_columns(&m, 1e-10).unwrap();
        let g = q.tr_matmul(&q).unwrap();
        assert!(g.sub(&Matrix::identity(3)).max_abs() < 1e-14);
    }
}
