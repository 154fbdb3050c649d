//! Scalar abstraction for the exterior-algebra layer.
//!
//! Everything combinatorial (words, wedge signs, Fourier bookkeeping) is
//! independent of the float width, so the algebra is generic over [`Scalar`]
//! and instantiated at `f64` by default. The dense linear-algebra layer works
//! in `f64` only.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar usable as the coefficient field of the algebra.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + std::fmt::Debug + std::fmt::Display + Send + Sync + 'static
{
    /// Shorthand for a real constant coming from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic scalar.
pub type C<S> = Complex<S>;

/// `2 * pi` in the scalar type.
pub fn two_pi<S: Scalar>() -> S {
    S::PI() + S::PI()
}

/// `1 / sqrt(2)` in the scalar type.
pub fn inv_sqrt2<S: Scalar>() -> S {
    S::one() / S::SQRT_2()
}
