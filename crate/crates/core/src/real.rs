use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Scalar type the library computes in. Implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Infallible for the float types we support.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// A tolerance that is `spec` for `f64` but never below `ulps` machine
    /// epsilons of `Self`.
    #[inline]
    fn tolerance(spec: f64, ulps: f64) -> Self {
        Self::lit(spec).max(Self::epsilon() * Self::lit(ulps))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("float converts to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// `x log2 x` with the convention `0 log 0 = 0`; non-positive inputs give 0.
#[inline]
pub(crate) fn xlog2x<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Base-2 Shannon entropy of a probability vector. Entries are clamped to
/// `[0, 1]` first to absorb round-off.
pub fn shannon_entropy<T: Real>(probs: &[T]) -> T {
    probs
        .iter()
        .map(|&p| -xlog2x(p.max(T::zero()).min(T::one())))
        .fold(T::zero(), |acc, v| acc + v)
}

/// Binary entropy `H2(p)` in bits.
pub fn binary_entropy<T: Real>(p: T) -> T {
    shannon_entropy(&[p, T::one() - p])
}

/// `atanh(u)/u`, continuous at `u = 0`.
#[inline]
pub(crate) fn atanh_over<T: Real>(u: T) -> T {
    if u.abs() < T::lit(1e-4) {
        let u2 = u * u;
        T::one() + u2 / T::lit(3.0) + u2 * u2 / T::lit(5.0)
    } else {
        u.atanh() / u
    }
}
