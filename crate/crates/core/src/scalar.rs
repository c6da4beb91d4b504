//! The floating-point abstraction every numerical routine is generic over.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar usable by the linear algebra, scatter, projection and
/// classification code. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this type.
    fn c(v: f64) -> Self {
        Self::from_f64(v).expect("f64 constant representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Rescales a tolerance stated for `f64` to this type's precision.
    ///
    /// `rel_tol(1e-14)` is `1e-14` for `f64` and roughly `5e-6` for `f32`.
    fn rel_tol(base: f64) -> Self {
        let eps = Self::epsilon().as_f64();
        Self::c(base * (eps / f64::EPSILON).max(1.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rel_tol_is_identity_for_f64() {
        assert_eq!(f64::rel_tol(1e-14), 1e-14);
    }

    #[test]
    fn rel_tol_widens_for_f32() {
        let t = f32::rel_tol(1e-14);
        assert!(t > 1e-6 && t < 1e-5, "{t}");
    }
}
