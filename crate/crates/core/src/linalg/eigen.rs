use std::cmp::Ordering;

use crate::Scalar;

use super::{LinalgError, Matrix, SymMatrix};

/// Full sweeps of cyclic Jacobi allowed before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigenvalues sorted non-increasing, paired with the columns of `vectors`.
///
/// Every column is sign-normalized: its largest-magnitude entry is positive,
/// with ties going to the lowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Scalar> EigenPairs<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Keeps the `k` leading pairs.
    pub fn truncate(mut self, k: usize) -> Self {
        self.values.truncate(k);
        self.vectors = self.vectors.leading_columns(k.min(self.vectors.cols()));
        self
    }

    /// Applies the sign convention to every column.
    pub(crate) fn normalize_signs(&mut self) {
        for j in 0..self.vectors.cols() {
            normalize_sign(self.vectors.column_mut(j));
        }
    }
}

pub(crate) fn normalize_sign<T: Scalar>(v: &mut [T]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < T::zero()) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Converged once every off-diagonal magnitude is at most
/// `1e-14 · ‖a‖_max` (rescaled for `f32`).
pub fn sym_eig<T: Scalar>(a: &SymMatrix<T>) -> Result<EigenPairs<T>, LinalgError> {
    let n = a.dim();
    let threshold = T::rel_tol(1e-14) * a.max_abs();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::<T>::identity(n);

    let mut converged = false;
    for _sweep in 0..=MAX_JACOBI_SWEEPS {
        if max_off_diagonal(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= threshold {
                    continue;
                }
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence {
            sweeps: MAX_JACOBI_SWEEPS,
        });
    }

    let diag: Vec<T> = (0..n).map(|i| m[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their Jacobi diagonal order
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(Ordering::Equal));
    let mut pairs = EigenPairs {
        values: order.iter().map(|&i| diag[i]).collect(),
        vectors: v.select_columns(&order),
    };
    pairs.normalize_signs();
    Ok(pairs)
}

fn max_off_diagonal<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.rows();
    let mut best = T::zero();
    for j in 0..n {
        for (i, x) in m.column(j).iter().enumerate().skip(j + 1) {
            debug_assert!(i > j);
            best = best.max(x.abs());
        }
    }
    best
}

fn rotate_columns<T: Scalar>(x: &mut [T], y: &mut [T], c: T, s: T) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let (u, w) = (*a, *b);
        *a = c * u - s * w;
        *b = s * u + c * w;
    }
}

/// Zeroes `m[(p, q)]` with one Jacobi rotation and accumulates it into `v`.
///
/// Columns `p` and `q` are rotated as contiguous slices, then mirrored into
/// rows `p` and `q`.
fn rotate<T: Scalar>(m: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let n = m.rows();
    let apq = m[(p, q)];
    let (app, aqq) = (m[(p, p)], m[(q, q)]);
    let two = T::c(2.0);
    let theta = (aqq - app) / (two * apq);
    let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
    let c = T::one() / t.hypot(T::one());
    let s = t * c;

    let (cp, cq) = m.column_pair_mut(p, q);
    rotate_columns(cp, cq, c, s);
    cp[p] = app - t * apq;
    cq[q] = aqq + t * apq;
    cp[q] = T::zero();
    cq[p] = T::zero();
    for k in 0..n {
        if k != p && k != q {
            m[(p, k)] = m[(k, p)];
            m[(q, k)] = m[(k, q)];
        }
    }
    let (vp, vq) = v.column_pair_mut(p, q);
    rotate_columns(vp, vq, c, s);
}
