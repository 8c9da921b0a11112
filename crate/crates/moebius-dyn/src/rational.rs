//! Arbitrary-precision rational scalars.
//!
//! [`Rational`] wraps a [`num_rational::BigRational`] and stays in canonical
//! form at all times: the denominator is positive and coprime to the
//! numerator after every construction and operation. Parsing accepts integer
//! strings and `"n/m"`; decimal strings are rejected so floating-point values
//! cannot leak into exact computations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Exact rational number in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `numer / denom`, reduced to canonical form.
    ///
    /// Panics if `denom` is zero.
    pub fn new<N: Into<BigInt>, D: Into<BigInt>>(numer: N, denom: D) -> Self {
        let d = denom.into();
        assert!(!d.is_zero(), "rational denominator must be nonzero");
        Rational(BigRational::new(numer.into(), d))
    }

    pub fn integer<N: Into<BigInt>>(n: N) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "cannot invert zero");
        Rational(self.0.recip())
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            assert!(!self.is_zero(), "cannot raise zero to a negative power");
        }
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Nearest `f64`, for reporting only; exact logic never uses this.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact square root over the rationals.
///
/// Returns the non-negative root when `d` is the square of a rational
/// (checked separately on numerator and denominator with integer square
/// roots), `None` otherwise. Negative `d` is never a rational square but
/// remains usable as a radicand for [`crate::quad::QuadExt`].
pub fn sqrt_rational(d: &Rational) -> Option<Rational> {
    if d.is_negative() {
        return None;
    }
    if d.is_zero() {
        return Some(Rational::zero());
    }
    let rn = d.numer().sqrt();
    if &rn * &rn != *d.numer() {
        return None;
    }
    let rm = d.denom().sqrt();
    if &rm * &rm != *d.denom() {
        return None;
    }
    Some(Rational(BigRational::new(rn, rm)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    Empty,
    /// Decimal strings are rejected in exact contexts.
    DecimalRejected(String),
    InvalidDigits(String),
    ZeroDenominator,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRationalError::Empty => write!(f, "empty rational literal"),
            ParseRationalError::DecimalRejected(s) => {
                write!(
                    f,
                    "decimal literal {s:?} rejected; use \"n/m\" or an integer"
                )
            }
            ParseRationalError::InvalidDigits(s) => write!(f, "invalid rational literal {s:?}"),
            ParseRationalError::ZeroDenominator => write!(f, "denominator must be nonzero"),
        }
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseRationalError::Empty);
        }
        if s.contains('.') {
            return Err(ParseRationalError::DecimalRejected(s.to_owned()));
        }
        let parse_int = |part: &str| {
            part.trim()
                .parse::<BigInt>()
                .map_err(|_| ParseRationalError::InvalidDigits(s.to_owned()))
        };
        match s.split_once('/') {
            None => Ok(Rational::integer(parse_int(s)?)),
            Some((n, d)) => {
                let numer = parse_int(n)?;
                let denom = parse_int(d)?;
                if denom.is_zero() {
                    return Err(ParseRationalError::ZeroDenominator);
                }
                Ok(Rational(BigRational::new(numer, denom)))
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::integer(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form_is_stable() {
        // constructing 6/-4 yields -3/2
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x, r(-3, 2));
    }

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["-3/2", "7", "0", "22/7", "-1"] {
            let x: Rational = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
    }

    #[test]
    fn parse_rejects_decimals_and_zero_denominator() {
        assert!(matches!(
            "0.5".parse::<Rational>(),
            Err(ParseRationalError::DecimalRejected(_))
        ));
        assert!(matches!(
            "1/0".parse::<Rational>(),
            Err(ParseRationalError::ZeroDenominator)
        ));
        assert!(matches!(
            "x".parse::<Rational>(),
            Err(ParseRationalError::InvalidDigits(_))
        ));
        assert!(matches!(
            "".parse::<Rational>(),
            Err(ParseRationalError::Empty)
        ));
    }

    #[test]
    fn sqrt_rational_examples() {
        assert_eq!(sqrt_rational(&r(9, 4)), Some(r(3, 2)));
        assert_eq!(sqrt_rational(&r(12, 1)), None);
        assert_eq!(sqrt_rational(&Rational::zero()), Some(Rational::zero()));
        assert_eq!(sqrt_rational(&r(-4, 1)), None);
        assert_eq!(sqrt_rational(&r(49, 9)), Some(r(7, 3)));
    }

    #[test]
    fn arithmetic_is_exact() {
        let x = r(1, 3);
        let y = r(1, 6);
        assert_eq!(&x + &y, r(1, 2));
        assert_eq!(&x - &y, r(1, 6));
        assert_eq!(&x * &y, r(1, 18));
        assert_eq!(&x / &y, r(2, 1));
        assert_eq!(-x, r(-1, 3));
    }

    #[test]
    fn pow_handles_negative_exponents() {
        assert_eq!(r(2, 3).pow(3), r(8, 27));
        assert_eq!(r(2, 3).pow(-2), r(9, 4));
        assert_eq!(r(5, 1).pow(0), Rational::one());
    }
}
