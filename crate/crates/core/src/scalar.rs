//! The coefficient field.
//!
//! Everything in this crate is written against [`Scalar`], an exact field
//! with cheap by-reference arithmetic. The crate root fixes `Q` to
//! arbitrary-precision rationals; [`num_rational::Rational64`] also works
//! for small inputs where overflow is impossible.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Zero};

/// An exact field of characteristic zero.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(n: i64) -> Self;

    /// Numerator and denominator in lowest terms, denominator positive.
    fn to_num_den(&self) -> (String, String);

    fn from_num_den(num: &str, den: &str) -> Option<Self>;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    fn div_ref(&self, other: &Self) -> Self {
        self.clone() / other.clone()
    }

    /// `self - c * x`, the inner step of every elimination.
    fn sub_mul(&self, c: &Self, x: &Self) -> Self {
        self.clone() - c.clone() * x.clone()
    }

    fn sign(negative: bool) -> Self {
        if negative {
            -Self::one()
        } else {
            Self::one()
        }
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(BigInt::from(n))
    }

    fn to_num_den(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }

    fn from_num_den(num: &str, den: &str) -> Option<Self> {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Ratio::new(n, d))
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn div_ref(&self, other: &Self) -> Self {
        self / other
    }

    fn sub_mul(&self, c: &Self, x: &Self) -> Self {
        if c.is_one() {
            return self - x;
        }
        self - &(c * x)
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn to_num_den(&self) -> (String, String) {
        (self.numer().to_string(), self.denom().to_string())
    }

    fn from_num_den(num: &str, den: &str) -> Option<Self> {
        let n: i64 = num.trim().parse().ok()?;
        let d: i64 = den.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Ratio::new(n, d))
    }
}

/// Parses `"p"` or `"p/q"` into a scalar.
pub fn parse_rational<F: Scalar>(text: &str) -> Option<F> {
    match text.split_once('/') {
        Some((n, d)) => F::from_num_den(n, d),
        None => F::from_num_den(text, "1"),
    }
}

/// Renders a scalar as `p` or `p/q`.
pub fn format_rational<F: Scalar>(x: &F) -> String {
    let (n, d) = x.to_num_den();
    if d == "1" {
        n
    } else {
        format!("{n}/{d}")
    }
}
