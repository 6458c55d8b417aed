//! Floating-point scalar abstraction.
//!
//! All weight and field arithmetic is generic over [`Scalar`] so networks
//! can be compiled in `f32` (half the memory traffic) or `f64` (reference
//! precision). Counters stay in integer form regardless; the scalar type
//! only enters when probability estimates and weights are produced.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::num::ParseFloatError;
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Scalar type usable for probabilities, weights, and fields.
///
/// Implemented for `f32` and `f64`. The `FromStr` bound keeps text
/// round-trips (weight dumps, CSV rows) monomorphic in the same type.
pub trait Scalar:
    'static
    + Copy
    + Send
    + Sync
    + Default
    + Debug
    + Display
    + Float
    + FromPrimitive
    + NumAssign
    + Sum
    + FromStr<Err = ParseFloatError>
{
    /// Lossless conversion from `f64` where the target is `f64`, nearest
    /// otherwise. Panics only for non-finite inputs that the target cannot
    /// represent, which no caller produces.
    fn from_f64_lossy(value: f64) -> Self {
        Self::from_f64(value).expect("f64 convertible to scalar")
    }

    /// Widening conversion for accumulation and reporting.
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}
