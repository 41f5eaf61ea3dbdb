use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Scalar type for real-valued analytics: `f32` or `f64`.
///
/// Blanket-implemented for any float that can be built from primitive
/// integers, which is what the estimators and the timing model need to turn
/// bit counts and cycle counts into reals.
pub trait Real: Float + FromPrimitive + Debug + Display + 'static {
    /// Lossless-enough conversion from a `usize` count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as scalar")
    }

    /// Conversion from an `f64` constant (tables, tolerances, defaults).
    fn from_f64c(v: f64) -> Self {
        Self::from_f64(v).expect("constant representable as scalar")
    }
}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + 'static {}
