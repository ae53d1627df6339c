//! Scalar abstraction shared by every geometric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the kinematics and geometry are written against.
///
/// Implemented for `f32` and `f64`. Tolerances quoted in the docs assume `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold it,
    /// which does not happen for the finite literals used in this crate.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Below this magnitude, angle-dependent ratios switch to their series form.
    #[inline]
    fn angle_eps() -> Self {
        Self::lit(ANGLE_EPS)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Series switch-over for `|θ|`, radians.
pub const ANGLE_EPS: f64 = 1e-6;

/// `sin(x) / x`, continuous through zero.
#[inline]
pub fn sinc<T: Scalar>(x: T) -> T {
    if x.abs() < T::angle_eps() {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// `x / tan(x)`, continuous through zero (equals 1 at the origin).
#[inline]
pub fn x_over_tan<T: Scalar>(x: T) -> T {
    if x.abs() < T::angle_eps() {
        let x2 = x * x;
        T::one() - x2 / T::lit(3.0) - x2 * x2 / T::lit(45.0)
    } else {
        x / x.tan()
    }
}

#[inline]
pub fn deg<T: Scalar>(d: T) -> T {
    d.to_radians()
}
