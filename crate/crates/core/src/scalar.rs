//! Floating point abstraction shared by every solver in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the probability machinery is generic over (`f32` or `f64`).
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Absolute tolerance used when checking that probabilities sum to one.
    fn prob_tol() -> Self;

    /// Slack allowed when asserting that an objective sequence does not increase.
    fn descent_slack() -> Self;

    /// Lossy conversion from `f64`; every literal in the crate goes through here.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn prob_tol() -> Self {
        1e-9
    }

    fn descent_slack() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn prob_tol() -> Self {
        1e-5
    }

    fn descent_slack() -> Self {
        1e-5
    }
}

/// `x * ln(x / y)` with the conventions `0 ln(0/y) = 0` and `x ln(x/0) = +inf`.
#[inline]
pub(crate) fn xlogx_over_y<T: Scalar>(x: T, y: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else if y <= T::zero() {
        T::infinity()
    } else {
        x * (x / y).ln()
    }
}

/// Numerically stable `ln(sum(exp(v)))`.
pub(crate) fn log_sum_exp<T: Scalar>(v: &[T]) -> T {
    let m = v.iter().copied().fold(T::neg_infinity(), T::max);
    if m == T::neg_infinity() || !m.is_finite() {
        return m;
    }
    let s: T = v.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}
