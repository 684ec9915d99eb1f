//! Scalar abstraction: the whole simulation core is generic over the
//! floating-point type through this trait.

use core::ops::{AddAssign, DivAssign, MulAssign, SubAssign};
use std::fmt;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar usable by the simulation (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + fmt::Debug
    + fmt::Display
    + Default
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant into `Self`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    /// Widens to `f64` for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Next representable value toward +∞.
    fn next_up(self) -> Self;

    /// Next representable value toward −∞.
    fn next_down(self) -> Self;
}

impl Real for f32 {
    fn next_up(self) -> Self {
        f32::next_up(self)
    }

    fn next_down(self) -> Self {
        f32::next_down(self)
    }
}

impl Real for f64 {
    fn next_up(self) -> Self {
        f64::next_up(self)
    }

    fn next_down(self) -> Self {
        f64::next_down(self)
    }
}

/// Degrees to radians.
pub fn deg_to_rad<T: Real>(deg: T) -> T {
    deg * T::PI() / T::of(180.0)
}

/// Radians to degrees.
pub fn rad_to_deg<T: Real>(rad: T) -> T {
    rad * T::of(180.0) / T::PI()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_conversion() {
        assert_eq!(f64::of(2.5), 2.5);
        assert_eq!(f32::of(2.5), 2.5f32);
    }

    #[test]
    fn degree_radian_conversion() {
        assert!((deg_to_rad(180.0f64) - std::f64::consts::PI).abs() < 1e-15);
        assert!((rad_to_deg(std::f64::consts::FRAC_PI_2) - 90.0).abs() < 1e-12);
    }
}
