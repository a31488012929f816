//! The scalar abstraction shared by every real-valued computation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// Everything here is reachable through `num_traits`; the helpers only save
/// callers from unwrapping conversions that cannot fail for the literals and
/// integer inputs this crate feeds them.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("every f64 literal converts to a float type")
    }

    /// Nearest representable value of an integer.
    fn from_int(n: u64) -> Self {
        Self::from_u64(n).expect("u64 converts to a float type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
