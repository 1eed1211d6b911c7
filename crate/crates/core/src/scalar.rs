//! Scalar abstraction shared by every numerical kernel in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating point type the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into `Self`.
    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Surface area |S^{N-1}| of the unit sphere in ℝ^N.
pub fn sphere_area<T: Real>(dim: usize) -> T {
    let half = T::lit(dim as f64 / 2.0);
    let two = T::lit(2.0);
    two * T::PI().powf(half) / crate::specfun::gamma_unchecked(half)
}

/// Volume |B_R| of the ball of radius `radius` in ℝ^N.
pub fn ball_volume<T: Real>(dim: usize, radius: T) -> T {
    sphere_area::<T>(dim) * radius.powi(dim as i32) / T::from_count(dim)
}
