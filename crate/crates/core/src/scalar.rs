use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Floating-point type used for information-theoretic edge weights.
pub trait Scalar: Float + FromPrimitive + Sum + Debug + Send + Sync + 'static {
    /// Weights at or below this value are treated as carrying no dependence.
    fn zero_tolerance() -> Self {
        Self::epsilon() * Self::from_u32(1024).unwrap()
    }

    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits the scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
