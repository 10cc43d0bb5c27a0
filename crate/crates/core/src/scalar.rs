//! Scalar abstraction for coordinate arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable as a coordinate type.
///
/// Implemented by `f32` and `f64`. Random generation always draws in
/// `f64` and narrows, so a fixed seed produces the same point cloud up
/// to precision regardless of the scalar chosen.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + 'static
{
    /// Lossless-enough conversion from `f64` used by generators and
    /// literal constants.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 converts to scalar")
    }

    /// Widening conversion for bookkeeping arithmetic.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + 'static
{
}

/// Squared Euclidean distance between two coordinate slices.
///
/// Used everywhere a comparison is needed; the square root is taken
/// only when a caller reports an actual distance.
#[inline]
pub fn dist_sq<F: Scalar>(a: &[F], b: &[F]) -> F {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = F::zero();
    for (&x, &y) in a.iter().zip(b.iter()) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

/// Euclidean distance between two coordinate slices.
#[inline]
pub fn dist<F: Scalar>(a: &[F], b: &[F]) -> F {
    dist_sq(a, b).sqrt()
}
