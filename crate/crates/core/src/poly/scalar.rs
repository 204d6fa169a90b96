use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::PadicNumber;
use crate::rational::Rational;

/// Coefficient ring for [`Poly`](super::Poly) and [`Series`](super::Series).
///
/// Constants are produced "like" an existing value so that p-adic
/// coefficients inherit the prime and working precision.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact, so zero tests are meaningful.
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn is_zero_s(&self) -> bool;
    fn try_inv(&self) -> Result<Self>;
    /// Invertible without loss: nonzero for exact types, valuation zero
    /// for p-adic ones.
    fn is_unit_s(&self) -> bool;
    /// Pivot quality for elimination: smaller is better, `i64::MAX` for zero.
    fn pivot_key(&self) -> i64;

    fn try_div(&self, other: &Self) -> Result<Self> {
        Ok(self.clone() * other.try_inv()?)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn from_int_like(&self, n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn is_unit_s(&self) -> bool {
        !self.is_zero()
    }
    fn pivot_key(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            0
        }
    }
}

impl Scalar for PadicNumber {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.prime(), self.precision().max(self.valuation()))
    }
    fn one_like(&self) -> Self {
        PadicNumber::one(self.prime(), self.precision().max(self.valuation()))
    }
    fn from_int_like(&self, n: i64) -> Self {
        PadicNumber::from_int(self.prime(), n, i64::MAX / 4)
    }
    fn from_rational_like(&self, q: &Rational) -> Self {
        PadicNumber::from_rational(self.prime(), q, i64::MAX / 4)
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn is_unit_s(&self) -> bool {
        self.is_unit()
    }
    fn pivot_key(&self) -> i64 {
        if self.is_zero() {
            i64::MAX
        } else {
            self.valuation()
        }
    }
}
