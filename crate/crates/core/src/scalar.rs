//! A small scalar abstraction so the rational-function formulas of the shift
//! relations can run both over `Complex64` (numerics) and over
//! `BigRational` (exact identity checking).

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Zero};
use std::ops::Neg;

/// Field element usable by the coefficient formulas.
pub trait Scalar: Clone + Num + FromPrimitive + Neg<Output = Self> {
    /// Magnitude-below-tolerance test. Exact types ignore the tolerance and
    /// test for zero, so genericity checks degrade gracefully to exactness.
    fn is_small(&self, tol: f64) -> bool;
}

impl Scalar for Complex64 {
    fn is_small(&self, tol: f64) -> bool {
        self.norm_sqr() <= tol * tol
    }
}

impl Scalar for BigRational {
    fn is_small(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// Embed a small integer into the scalar field.
pub fn int<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("small integer embeds into scalar field")
}
