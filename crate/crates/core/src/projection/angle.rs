use crate::linalg::{orthonormalize_columns, sym_eig, SymMatrix};
use crate::linalg::Matrix;
use crate::{Error, Result, Scalar};

/// Largest principal angle (radians) between the column spans of `w1` and
/// `w2`.
///
/// Both inputs are orthonormalized with modified Gram–Schmidt. With
/// `C = Q₁ᵀQ₂`, the angle is `arccos σ_min(C)`; when that is below π/4 it is
/// recomputed as `arcsin σ_max(Q₂ − Q₁C)`, which keeps full relative
/// accuracy for nearly identical subspaces.
pub fn subspace_angle<T: Scalar>(w1: &Matrix<T>, w2: &Matrix<T>) -> Result<T> {
    if w1.rows() != w2.rows() {
        return Err(Error::DimensionMismatch {
            expected: w1.rows(),
            found: w2.rows(),
        });
    }
    if w1.cols() != w2.cols() || w1.cols() == 0 {
        return Err(Error::DimensionMismatch {
            expected: w1.cols(),
            found: w2.cols(),
        });
    }
    let tol = T::rel_tol(1e-10);
    let q1 = orthonormalize_columns(w1, tol)?;
    let q2 = orthonormalize_columns(w2, tol)?;
    let c = q1.tr_matmul(&q2)?;

    let ctc = SymMatrix::symmetrize(&c.tr_matmul(&c)?)?;
    let cos_min = smallest_singular_value(&ctc)?.min(T::one());
    let quarter = T::c(std::f64::consts::FRAC_PI_4);
    let angle = cos_min.acos();
    if angle >= quarter {
        return Ok(angle);
    }

    let residual = q2.sub(&q1.matmul(&c)?);
    let rtr = SymMatrix::symmetrize(&residual.tr_matmul(&residual)?)?;
    let sin_max = sym_eig(&rtr)?.values[0].max(T::zero()).sqrt().min(T::one());
    Ok(sin_max.asin())
}

fn smallest_singular_value<T: Scalar>(gram: &SymMatrix<T>) -> Result<T> {
    let eig = sym_eig(gram)?;
    Ok(eig.values.last().copied().unwrap_or_else(T::zero).max(T::zero()).sqrt())
}
