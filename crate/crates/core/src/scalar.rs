//! Scalar kinds carried by [`Operator`](crate::operator::Operator) entries.
//!
//! Exact kinds (`i64`, [`Rational64`]) and float kinds (`f64`, [`Complex64`])
//! never convert into each other implicitly; use [`Operator::map`] with one of
//! the conversion helpers here.
//!
//! [`Operator::map`]: crate::operator::Operator::map

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarKind {
    ExactInteger,
    ExactRational,
    Float,
    ComplexFloat,
}

impl ScalarKind {
    pub fn is_exact(self) -> bool {
        matches!(self, ScalarKind::ExactInteger | ScalarKind::ExactRational)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarKind::ExactInteger => "exact-integer",
            ScalarKind::ExactRational => "exact-rational",
            ScalarKind::Float => "float",
            ScalarKind::ComplexFloat => "complex-float",
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    /// `num / den`; exact kinds panic if the ratio is not representable.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> Complex64;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Scalar for Complex64 {
    const KIND: ScalarKind = ScalarKind::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Scalar for i64 {
    const KIND: ScalarKind = ScalarKind::ExactInteger;

    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(
            den != 0 && num % den == 0,
            "{num}/{den} is not an integer"
        );
        num / den
    }
    fn magnitude(&self) -> f64 {
        self.unsigned_abs() as f64
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self as f64, 0.0)
    }
}

impl Scalar for Rational64 {
    const KIND: ScalarKind = ScalarKind::ExactRational;

    fn zero() -> Self {
        <Rational64 as Zero>::zero()
    }
    fn one() -> Self {
        Rational64::from_integer(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational64::new(num, den)
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(self).abs()
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

pub fn rational_to_f64(r: &Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
