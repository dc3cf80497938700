//! Exact rational numbers.
//!
//! Every probability, cost and term value in the solver is a [`Rational`].
//! Values print as finite decimals whenever the denominator only has the
//! prime factors 2 and 5, and as `num/den` otherwise, so the textual form
//! always parses back to the identical value.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRationalError(pub String);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    /// True for values inside the closed unit interval.
    pub fn is_probability(&self) -> bool {
        !self.0.is_negative() && self.0 <= BigRational::one()
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Lossy conversion, only meant for display and diagnostics.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Digits after the decimal point when the value has a finite decimal
    /// expansion.
    fn decimal_places(&self) -> Option<usize> {
        let mut den = self.0.denom().clone();
        let two = BigInt::from(2);
        let five = BigInt::from(5);
        let (mut twos, mut fives) = (0usize, 0usize);
        while den.is_even() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        den.is_one().then_some(twos.max(fives))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            return write!(f, "{}", self.0.numer());
        }
        let Some(places) = self.decimal_places() else {
            return write!(f, "{}/{}", self.0.numer(), self.0.denom());
        };
        let scale = BigInt::from(10).pow(places as u32);
        let scaled = (self.0.numer() * &scale) / self.0.denom();
        let sign = if scaled.is_negative() { "-" } else { "" };
        let magnitude = scaled.abs();
        let (int_part, frac_part) = magnitude.div_rem(&scale);
        write!(f, "{sign}{int_part}.{frac:0>width$}", frac = frac_part, width = places)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `12`, `-3`, `0.625` and `1/3`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(text.to_string());
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let value = if let Some((num, den)) = body.split_once('/') {
            if !digits(num) || !digits(den) {
                return Err(err());
            }
            let den: BigInt = den.parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            BigRational::new(num.parse().map_err(|_| err())?, den)
        } else if let Some((int, frac)) = body.split_once('.') {
            if !digits(int) || !digits(frac) {
                return Err(err());
            }
            let scale = BigInt::from(10).pow(frac.len() as u32);
            let whole: BigInt = format!("{int}{frac}").parse().map_err(|_| err())?;
            BigRational::new(whole, scale)
        } else {
            if !digits(body) {
                return Err(err());
            }
            BigRational::from_integer(body.parse().map_err(|_| err())?)
        };
        Ok(Rational(if negative { -value } else { value }))
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<usize> for Rational {
    fn from(value: usize) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}
