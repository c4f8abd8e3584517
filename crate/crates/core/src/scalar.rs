//! Exact rational scalars, complex floats, and the tagged `Scalar` union used
//! at API and serialization boundaries.
//!
//! All symbolic work runs over `Rational`; trajectory work runs over
//! `Complex64`. The `Coeff` trait abstracts the two so polynomials and the
//! reduction pipeline are written once.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_complex::Complex64;

/// Arbitrary-precision rational number, always in canonical form:
/// gcd(|numerator|, denominator) = 1 and denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rational(BigRational::new(num.into(), den))
    }

    pub fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
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

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero");
        Rational(self.0.recip())
    }

    /// Integer power, negative exponents allowed for nonzero values.
    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            self.recip().powi(-e)
        } else {
            Rational(self.0.pow(e as i32))
        }
    }

    /// Exact square root if self is the square of a rational, else None.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let ns = self.numer().sqrt();
        let ds = self.denom().sqrt();
        if &ns * &ns == *self.numer() && &ds * &ds == *self.denom() {
            Some(Rational(BigRational::new(ns, ds)))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // fall back through the sign when the parts overflow f64
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }

    /// Exact conversion of a finite float (every f64 is p/2^k).
    pub fn from_f64_exact(v: f64) -> Option<Self> {
        BigRational::from_float(v).map(Rational)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational(BigRational::from_integer(v))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
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

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
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

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Invalid(format!("bad rational `{s}`")))
        };
        match s.split_once('/') {
            Some((num, den)) => {
                let den = parse_int(den)?;
                if den.is_zero() {
                    return Err(Error::Invalid(format!("zero denominator in `{s}`")));
                }
                Ok(Rational::new(parse_int(num)?, den))
            }
            None => Ok(Rational::from(parse_int(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// A scalar that is either exact (rational) or numeric (complex double).
#[derive(Clone, PartialEq, Debug)]
pub enum Scalar {
    Exact(Rational),
    Numeric(Complex64),
}

impl Scalar {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => r.to_complex(),
            Scalar::Numeric(z) => *z,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Numeric(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Numeric(z) => write!(f, "[{}, {}]", z.re, z.im),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => r.serialize(serializer),
            Scalar::Numeric(z) => {
                let mut seq = serializer.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\", an integer, or a [re, im] pair")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                v.parse::<Rational>()
                    .map(Scalar::Exact)
                    .map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Exact(Rational::from(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Exact(Rational::from(v as i64)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Numeric(Complex64::new(v, 0.0)))
            }

            fn visit_seq<A: de::SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<Scalar, A::Error> {
                let re: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                Ok(Scalar::Numeric(Complex64::new(re, im)))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

/// Coefficient field: exact rationals or complex doubles.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Square root: exact for rationals (None if irrational), principal
    /// branch for complex.
    fn sqrt(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    fn to_scalar(&self) -> Scalar;
    fn try_from_scalar(s: &Scalar) -> Option<Self>;

    fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Integer power, negative exponents via the inverse.
    fn powi(&self, e: i64) -> Self {
        if e < 0 {
            Self::one().div(self).powu((-e) as u32)
        } else {
            self.powu(e as u32)
        }
    }
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn from_int(v: i64) -> Self {
        Rational::from_int(v)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn sqrt(&self) -> Option<Self> {
        self.sqrt_exact()
    }
    fn to_complex(&self) -> Complex64 {
        Rational::to_complex(self)
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Exact(self.clone())
    }
    fn try_from_scalar(s: &Scalar) -> Option<Self> {
        s.as_exact().cloned()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_complex()
    }
    fn sqrt(&self) -> Option<Self> {
        Some(num_complex::Complex::sqrt(*self))
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::Numeric(*self)
    }
    fn try_from_scalar(s: &Scalar) -> Option<Self> {
        Some(s.to_complex())
    }
}

/// Shorthand rational constructor used throughout tests.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = Rational::new(4, -6);
        assert_eq!(r, rat(-2, 3));
        assert_eq!(r.to_string(), "-2/3");
        assert!(r.denom() > &BigInt::zero());
    }

    #[test]
    fn exact_addition() {
        // (a/b + c/d) = (ad + bc)/(bd), reduced
        let a = rat(1, 6);
        let b = rat(1, 10);
        assert_eq!(&a + &b, rat(4, 15));
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3", "-7/2", "0", "22/7"] {
            let r: Rational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("4/6".parse::<Rational>().unwrap().to_string(), "2/3");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn sqrt_exact_only_on_squares() {
        assert_eq!(rat(9, 4).sqrt_exact(), Some(rat(3, 2)));
        assert_eq!(rat(2, 1).sqrt_exact(), None);
        assert_eq!(rat(-1, 1).sqrt_exact(), None);
        assert_eq!(rat(0, 1).sqrt_exact(), Some(rat(0, 1)));
    }

    #[test]
    fn scalar_json_formats() {
        let e = Scalar::Exact(rat(1, 2));
        assert_eq!(serde_json::to_string(&e).unwrap(), "\"1/2\"");
        let n = Scalar::Numeric(Complex64::new(1.5, -2.0));
        assert_eq!(serde_json::to_string(&n).unwrap(), "[1.5,-2.0]");
        let back: Scalar = serde_json::from_str("\"1/2\"").unwrap();
        assert_eq!(back, e);
        let back: Scalar = serde_json::from_str("[1.5,-2.0]").unwrap();
        assert_eq!(back, n);
        let int: Scalar = serde_json::from_str("5").unwrap();
        assert_eq!(int, Scalar::Exact(rat(5, 1)));
    }

    #[test]
    fn float_to_rational_is_exact() {
        let r = Rational::from_f64_exact(0.375).unwrap();
        assert_eq!(r, rat(3, 8));
    }
}
