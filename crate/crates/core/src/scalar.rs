//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the library is generic over.
///
/// Tolerances are associated with the type because the thresholds used for
/// double precision are meaningless in single precision.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for objects arriving from outside (files, user input).
    fn input_tol() -> Self;
    /// Tolerance for objects this library constructed itself.
    fn internal_tol() -> Self;
    /// Slack used in strict "exceeds the bound" comparisons.
    fn detect_slack() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real converts to f64")
    }

    #[inline]
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    fn input_tol() -> Self {
        1e-8
    }
    fn internal_tol() -> Self {
        1e-10
    }
    fn detect_slack() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn input_tol() -> Self {
        1e-4
    }
    fn internal_tol() -> Self {
        1e-5
    }
    fn detect_slack() -> Self {
        1e-6
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
