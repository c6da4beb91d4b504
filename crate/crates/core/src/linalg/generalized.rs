use crate::Scalar;

use super::eigen::normalize_sign;
use super::{cholesky, sym_eig, EigenPairs, LinalgError, Matrix, SymMatrix};

/// The `k` largest-λ solutions of the symmetric-definite pencil
/// `a·w = λ·b·w`.
///
/// Reduces through `b = L·Lᵀ` to the standard problem on `L⁻¹·a·L⁻ᵀ` and
/// maps eigenvectors back with `w = L⁻ᵀ·v`, so the returned columns satisfy
/// `Wᵀ·b·W = I`.
pub fn generalized_eig<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    k: usize,
) -> Result<EigenPairs<T>, LinalgError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    if k == 0 || k > n {
        return Err(LinalgError::InvalidK { k, dim: n });
    }
    let l = cholesky(b)?;

    // Y = L⁻¹·a, then C = L⁻¹·Yᵀ = L⁻¹·a·L⁻ᵀ since a is symmetric.
    let mut y = a.as_matrix().clone();
    for j in 0..n {
        l.solve_in_place(y.column_mut(j));
    }
    let mut c = y.transpose();
    for j in 0..n {
        l.solve_in_place(c.column_mut(j));
    }
    let c = SymMatrix::symmetrize(&c)?;

    let std = sym_eig(&c)?.truncate(k);
    let mut w = Matrix::zeros(n, k);
    for j in 0..k {
        let col = w.column_mut(j);
        col.copy_from_slice(std.vectors.column(j));
        l.solve_transposed_in_place(col);
        normalize_sign(col);
    }
    Ok(EigenPairs {
        values: std.values,
        vectors: w,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_denominator_reduces_to_standard() {
        let a = SymMatrix::from_diagonal(&[2.0, 1.0]);
        let e = generalized_eig(&a, &SymMatrix::identity(2), 2).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert_eq!(e.vectors, Matrix::identity(2));
    }

    #[test]
    fn diagonal_pencil() {
        // 2·w = λ·1·w on axis 1; 1·w = λ·4·w on axis 2 → λ = 0.25, w = 0.5·e2
        let a = SymMatrix::from_diagonal(&[2.0, 1.0]);
        let b = SymMatrix::from_diagonal(&[1.0, 4.0]);
        let e = generalized_eig(&a, &b, 2).unwrap();
        assert_eq!(e.values, vec![2.0, 0.25]);
        assert_eq!(e.vectors, Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.5]]));
    }

    #[test]
    fn zero_numerator() {
        let e = generalized_eig(&SymMatrix::<f64>::zeros(3), &SymMatrix::identity(3), 1).unwrap();
        assert_eq!(e.values, vec![0.0]);
        assert_eq!(e.vectors.column(0), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn invalid_k_and_indefinite_denominator() {
        let a = SymMatrix::<f64>::identity(2);
        assert!(matches!(
            generalized_eig(&a, &a, 3),
            Err(LinalgError::InvalidK { k: 3, dim: 2 })
        ));
        assert!(matches!(
            generalized_eig(&a, &a, 0),
            Err(LinalgError::InvalidK { .. })
        ));
        let b = SymMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(
            generalized_eig(&a, &b, 1),
            Err(LinalgError::NotPositiveDefinite { .. })
        ));
    }
}
