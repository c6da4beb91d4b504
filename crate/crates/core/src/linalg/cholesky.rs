use crate::Scalar;

use super::{LinalgError, LowerTriangular, Matrix, SymMatrix};

/// Cholesky factorization `b = L·Lᵀ`.
///
/// A pivot at or below `dim · 1e-14 · ‖b‖_max` (rescaled for `f32`) is
/// reported as [`LinalgError::NotPositiveDefinite`]; for the projection
/// pencils that means the stabilizer `ρ` is too small.
pub fn cholesky<T: Scalar>(b: &SymMatrix<T>) -> Result<LowerTriangular<T>, LinalgError> {
    let n = b.dim();
    let threshold = T::from_usize_lossy(n) * T::rel_tol(1e-14) * b.max_abs();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut d = b.get(j, j);
        for k in 0..j {
            d = d - l[(j, k)] * l[(j, k)];
        }
        if !(d > threshold) {
            return Err(LinalgError::NotPositiveDefinite {
                index: j,
                pivot: d.as_f64(),
            });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = b.get(i, j);
            for k in 0..j {
                s = s - l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(LowerTriangular { inner: l })
}
