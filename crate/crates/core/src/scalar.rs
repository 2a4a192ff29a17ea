//! Scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point scalar the library is generic over: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// An absolute tolerance that never drops below the working precision.
    ///
    /// `tol(1e-12)` is `1e-12` for `f64` but widens to a few ulps for `f32`.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(64.0);
        Self::lit(x).max(floor)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle into `[0, 2π)`.
pub fn wrap_two_pi<T: Real>(x: T) -> T {
    let two_pi = T::TAU();
    let mut r = x % two_pi;
    if r < T::zero() {
        r += two_pi;
    }
    if r >= two_pi {
        r = T::zero();
    }
    r
}

/// `sign(x)` with `sign(0) = +1`.
#[inline]
pub(crate) fn sign_nonneg<T: Real>(x: T) -> T {
    if x < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}
