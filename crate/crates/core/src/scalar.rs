use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point type the theory code is written against: `f32` or `f64`.
///
/// Tolerances quoted throughout the crate (1e-10 root residuals and the
/// like) assume `f64`; `f32` works for every routine but at its own
/// precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count into the scalar type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[inline]
pub(crate) fn half<T: Scalar>() -> T {
    T::lit(0.5)
}

#[inline]
pub(crate) fn two<T: Scalar>() -> T {
    T::lit(2.0)
}
