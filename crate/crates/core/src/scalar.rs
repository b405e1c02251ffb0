//! Scalar abstraction shared by every table and algorithm in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real-valued energy type. Implemented for `f32` and `f64`.
///
/// Integer-valued energies are represented exactly by both (within the
/// mantissa range), which is what the exactness checks in the test suites
/// rely on.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, saturating to infinities where needed.
    fn of(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(|| {
            if value > 0.0 {
                Self::infinity()
            } else {
                Self::neg_infinity()
            }
        })
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `log(exp(a) + exp(b))` with the larger argument factored out.
    fn log_add_exp(a: Self, b: Self) -> Self {
        if a == Self::neg_infinity() {
            return b;
        }
        if b == Self::neg_infinity() {
            return a;
        }
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        hi + (lo - hi).exp().ln_1p()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
