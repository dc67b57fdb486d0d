//! Exact arbitrary-precision rational scalars.
//!
//! Every verdict in this crate is computed over the rationals; no floating
//! point is used anywhere. Values are always stored reduced with a positive
//! denominator, and serialize as the strings `"p"` or `"p/q"` (base 10,
//! optional leading `-` on the numerator only).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An exact rational number, stored reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// Builds `num/den`, reducing and normalizing the sign. Fails on `den = 0`.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::BadRational("zero denominator".into()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    /// Convenience constructor from machine integers; panics on `den = 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
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

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Sign as -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn valid_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `p` or `p/q` with `p` an optionally negated decimal integer and
    /// `q` an unsigned decimal integer. `q = 0`, embedded signs, whitespace and
    /// empty components are rejected. Non-reduced inputs are reduced.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadRational(format!("malformed rational {s:?}"));
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let unsigned = num_str.strip_prefix('-').unwrap_or(num_str);
        if !valid_digits(unsigned) {
            return Err(bad());
        }
        let num = BigInt::from_str(num_str).map_err(|_| bad())?;
        let den = match den_str {
            Some(d) => {
                if !valid_digits(d) {
                    return Err(bad());
                }
                BigInt::from_str(d).map_err(|_| bad())?
            }
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::BadRational(format!("zero denominator in {s:?}")));
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e| D::Error::custom(format!("{e}")))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($trait::$method(self.0, rhs.0))
            }
        }

        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat($trait::$method(&self.0, &rhs.0))
            }
        }

        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($trait::$method(self.0, &rhs.0))
            }
        }

        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rat> for &Rat {
    type Output = Rat;
    fn div(self, rhs: &'a Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rat> for Rat {
    fn div_assign(&mut self, rhs: &Rat) {
        assert!(!rhs.is_zero(), "division by zero");
        self.0 /= &rhs.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!("3".parse::<Rat>().unwrap(), Rat::int(3));
        assert_eq!("-3".parse::<Rat>().unwrap(), Rat::int(-3));
        assert_eq!("6/4".parse::<Rat>().unwrap(), Rat::frac(3, 2));
        assert_eq!("-6/4".parse::<Rat>().unwrap(), Rat::frac(-3, 2));
        assert_eq!("0/7".parse::<Rat>().unwrap(), Rat::zero());
    }

    #[test]
    fn rejects_malformed_input() {
        for s in ["", "/", "1/", "/2", "1/0", "1/-2", "+1", " 1", "1 ", "1.5", "a", "--1", "1//2"] {
            assert!(s.parse::<Rat>().is_err(), "expected parse failure for {s:?}");
        }
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(Rat::frac(4, 2).to_string(), "2");
        assert_eq!(Rat::frac(-1, 3).to_string(), "-1/3");
        assert_eq!(Rat::zero().to_string(), "0");
    }

    #[test]
    fn stored_reduced_with_positive_denominator() {
        let r = Rat::frac(2, -4);
        assert_eq!(r.to_string(), "-1/2");
        assert!(r.denom().is_positive());
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Rat::frac(1, 3);
        let b = Rat::frac(1, 6);
        assert_eq!(&a + &b, Rat::frac(1, 2));
        assert_eq!(&a - &b, Rat::frac(1, 6));
        assert_eq!(&a * &b, Rat::frac(1, 18));
        assert_eq!(&a / &b, Rat::int(2));
    }
}
