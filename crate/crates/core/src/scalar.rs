//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real floating-point type the engine can run on (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
    /// Eigenvalues of a density matrix below this magnitude are treated as zero
    /// before entropies are taken.
    fn clip_floor() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Half-integer spin quantum number `s` from `2s`.
    #[inline]
    fn half(two: i64) -> Self {
        Self::lit(two as f64 * 0.5)
    }
}

impl Real for f64 {
    fn clip_floor() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn clip_floor() -> Self {
        1e-6
    }
}

/// `0 log2 0 := 0`; negative inputs are clipped.
#[inline]
pub(crate) fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Numerically safe `ln(sinh(x))` for `x > 0`.
pub fn ln_sinh<T: Real>(x: T) -> T {
    if x > T::lit(20.0) {
        x - T::LN_2() + (-(-(x + x)).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}
