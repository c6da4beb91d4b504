//! Dense symmetric linear algebra: Cholesky, cyclic Jacobi eigensolver and
//! the symmetric-definite generalized eigenproblem.

mod cholesky;
mod eigen;
mod generalized;
mod matrix;
mod sym;

pub use cholesky::cholesky;
pub use eigen::{sym_eig, EigenPairs, MAX_JACOBI_SWEEPS};
pub use generalized::generalized_eig;
pub use matrix::{dot, norm2, orthonormalize_columns, Matrix};
pub use sym::{LowerTriangular, SymMatrix};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index}); increase the regularizer rho")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("requested {k} components but dimension is {dim}")]
    InvalidK { k: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("columns are linearly dependent (column {column})")]
    RankDeficient { column: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}
