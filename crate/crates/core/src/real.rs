//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the solvers: `f32` or `f64`.
///
/// Accuracy targets quoted in the docs refer to `f64`; `f32` works but
/// tolerances scale with its epsilon.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count or order into this scalar.
    #[inline]
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer representable")
    }

    /// Euler–Mascheroni constant.
    #[inline]
    fn euler_gamma() -> Self {
        Self::lit(0.577_215_664_901_532_9)
    }

    /// Tolerance used to accept a converged root or solution: `1e-10` for
    /// `f64`, widened to a few thousand ulps for narrower types.
    #[inline]
    fn solve_tol() -> Self {
        Self::lit(1e-10).max(Self::epsilon() * Self::lit(2048.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}
