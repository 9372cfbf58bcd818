//! The floating-point scalar abstraction shared by every module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar: implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Widens this value to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }

    /// `2π`.
    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle to `[0, 2π)`.
#[inline]
pub fn reduce_angle<T: Real>(theta: T) -> T {
    let tau = T::two_pi();
    let r = theta - tau * (theta / tau).floor();
    if r >= tau || r < T::zero() {
        T::zero()
    } else {
        r
    }
}

/// Distance between two angles measured along the circle, in `[0, π]`.
#[inline]
pub fn circle_distance<T: Real>(x: T, y: T) -> T {
    let d = reduce_angle(x - y);
    d.min(T::two_pi() - d)
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    let (s, c) = theta.sin_cos();
    Complex::new(c, s)
}

/// Widens a complex value to `Complex<f64>`.
#[inline]
pub fn widen<T: Real>(z: Complex<T>) -> Complex<f64> {
    Complex::new(z.re.as_f64(), z.im.as_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_lands_in_half_open_interval() {
        let tau = std::f64::consts::TAU;
        for &x in &[-tau, -1.0, 0.0, 1.0, tau, 3.0 * tau + 0.5, -1e-18] {
            let r = reduce_angle(x);
            assert!((0.0..tau).contains(&r), "{x} -> {r}");
        }
        assert!((reduce_angle(-1.0) - (tau - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn circle_distance_is_symmetric_and_wraps() {
        assert!((circle_distance(0.1, 6.2) - (std::f64::consts::TAU - 6.1)).abs() < 1e-12);
        assert_eq!(circle_distance(1.0f64, 1.0), 0.0);
        assert!((circle_distance(0.0f32, std::f32::consts::PI) - std::f32::consts::PI).abs() < 1e-6);
    }
}
