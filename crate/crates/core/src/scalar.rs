//! Scalar abstraction for the measure kernel: `f32` or `f64`.

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar the information measures are computed in.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Tolerance for "this tensor sums to one" checks at construction.
    fn normalization_tol() -> Self;
}

impl Scalar for f32 {
    fn normalization_tol() -> Self {
        // 1e-9 is below f32 resolution around 1.0; use the scaled equivalent.
        1e-5
    }
}

impl Scalar for f64 {
    fn normalization_tol() -> Self {
        1e-9
    }
}
