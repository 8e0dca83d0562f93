//! Scalar abstraction for the numeric core.
//!
//! Everything evaluation-facing is generic over [`Real`], so the same
//! machinery runs in `f32` or `f64`. Construction-facing data that the
//! set engine keeps exact (Cantor-set endpoints, stage lengths) lives in
//! `num_rational::BigRational` and is converted to `Real` at query time.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` constant.
    ///
    /// Panics on values that do not convert (only possible for exotic
    /// `Real` impls; `f32`/`f64` accept every finite `f64`).
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 constant must be representable")
    }

    /// Nearest `f64`, for serialization and display.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Exact rational to scalar, rounding once at the end.
pub fn rational_to_real<R: Real>(q: &BigRational) -> R {
    // Direct to_f64 on huge numerators can overflow; scale via string-free
    // double division of truncated quotient + remainder.
    match q.to_f64() {
        Some(v) if v.is_finite() => R::of(v),
        _ => {
            let (num, den) = (q.numer(), q.denom());
            let quot = num / den;
            let rem = num - &quot * den;
            let q_f = quot.to_f64().unwrap_or(0.0);
            let r_f = BigRational::new(rem, den.clone()).to_f64().unwrap_or(0.0);
            R::of(q_f + r_f)
        }
    }
}

/// Exact rational view of a float (every finite float is rational).
pub fn real_to_rational<R: Real>(x: R) -> Option<BigRational> {
    let v = x.as_f64();
    if !v.is_finite() {
        return None;
    }
    BigRational::from_float(v)
}

/// Rational from integer parts.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trips_through_f64() {
        let q = ratio(1, 3);
        let x: f64 = rational_to_real(&q);
        assert!((x - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn float_is_exactly_rational() {
        let q = real_to_rational(0.1f64).unwrap();
        // 0.1 is not 1/10 in binary; the exact value round-trips.
        assert_eq!(rational_to_real::<f64>(&q), 0.1);
    }
}
