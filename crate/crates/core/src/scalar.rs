//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::FftNum;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar usable by the geometry, circulant and moment code.
///
/// Implemented for `f32` and `f64`. Tolerances throughout the crate are
/// written as `f64` literals and converted with [`cst`]; they are tuned for
/// `f64`, so `f32` users should expect to loosen them.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + FftNum
    + Sum
    + Default
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` constant into `T`.
#[inline]
pub fn cst<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 constant representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
