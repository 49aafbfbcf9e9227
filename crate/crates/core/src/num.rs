//! Scalar abstraction for the physical layers.
//!
//! Geometry, channel synthesis and SJNR evaluation are written once over
//! [`Real`] and instantiated for `f32` and `f64`. The semidefinite solver and
//! the optimizer work in `f64` only: their feasibility certificates sit below
//! single-precision epsilon.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point types usable by the physical model.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` constant into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `10^(db/10)`.
#[inline]
pub fn db_to_linear<T: Real>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// `10·log10(x)`.
#[inline]
pub fn linear_to_db<T: Real>(x: T) -> T {
    T::lit(10.0) * x.log10()
}

/// Wraps an angle into `[0, 2π)`.
#[inline]
pub fn wrap_phase<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let r = theta % tau;
    let r = if r < T::zero() { r + tau } else { r };
    // `r + tau` can round up to exactly tau for tiny negative inputs.
    if r >= tau {
        T::zero()
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_round_trip() {
        assert!((db_to_linear(20.0_f64) - 100.0).abs() < 1e-12);
        assert!((linear_to_db(1000.0_f64) - 30.0).abs() < 1e-12);
        assert!((db_to_linear(-55.0_f32) - 3.162_277_7e-6).abs() < 1e-11);
    }

    #[test]
    fn wrap_phase_range() {
        let tau = std::f64::consts::TAU;
        for &t in &[-1e-18, -7.0, 0.0, tau, 13.0, -tau] {
            let w = wrap_phase(t);
            assert!((0.0..std::f64::consts::TAU).contains(&w), "{t} -> {w}");
        }
        assert_eq!(wrap_phase(-1e-18_f64), 0.0);
    }
}
