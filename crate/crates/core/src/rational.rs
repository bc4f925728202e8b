//! Exact rational scalar arithmetic.
//!
//! Every coefficient, index parameter and scale factor in the exact layer is
//! an [`ExactRational`]: an arbitrary-precision rational kept in lowest terms
//! with a positive denominator. Serialization is always the string `"p/q"`
//! (integers as `"7/1"`), which is the canonical wire form used by the CLI.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Arbitrary-precision rational number, always in lowest terms, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` from machine integers. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        ExactRational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        ExactRational(BigRational::from_integer(n))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        ExactRational(self.0.recip())
    }

    /// Integer power with negative exponents allowed (base must be nonzero then).
    pub fn pow(&self, exp: i32) -> Self {
        ExactRational(self.0.pow(exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            // fall back to a quotient of lossy conversions for huge operands
            let n = self.0.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.0.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }

    /// Exact square root if `self` is a perfect rational square, else `None`.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let ns = self.0.numer().sqrt();
        let ds = self.0.denom().sqrt();
        if &(&ns * &ns) == self.0.numer() && &(&ds * &ds) == self.0.denom() {
            Some(ExactRational(BigRational::new(ns, ds)))
        } else {
            None
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses `"p/q"` or a bare integer string.
impl FromStr for ExactRational {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(num).map_err(|e| format!("bad numerator {num:?}: {e}"))?;
        let d = BigInt::from_str(den).map_err(|e| format!("bad denominator {den:?}: {e}"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(ExactRational(BigRational::new(n, d)))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a ExactRational> for &'a ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: &'a ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(&self.0 / &rhs.0)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl<'a> Neg for &'a ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl serde::Serialize for ExactRational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for ExactRational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shifted Pochhammer product `prod_{i=1}^{t} (kappa + i)`.
///
/// This is the convention forced by the boundary values of the seed
/// polynomials (e.g. the degree-1 seed evaluates to `1 + kappa` at `y = 1`);
/// the classical rising product starting at `kappa` does not reproduce them.
pub fn shifted_pochhammer(kappa: &ExactRational, t: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    for i in 1..=t {
        acc = acc * (kappa + &ExactRational::from_int(i as i64));
    }
    acc
}

/// Classical rising factorial `x (x+1) ... (x+m-1)`.
pub fn rising_factorial(x: &ExactRational, m: u32) -> ExactRational {
    let mut acc = ExactRational::one();
    for i in 0..m {
        acc = acc * (x + &ExactRational::from_int(i as i64));
    }
    acc
}

/// `k!!` for odd `k >= -1`, with `(-1)!! = 1`.
pub fn double_factorial(k: i64) -> BigInt {
    assert!(k >= -1 && k % 2 != 0, "double factorial needs odd k >= -1, got {k}");
    let mut acc = BigInt::one();
    let mut i = k;
    while i >= 2 {
        acc *= i;
        i -= 2;
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as i64).fold(BigInt::one(), |acc, i| acc * i)
}

/// Generalized binomial coefficient `C(z, k)` for rational `z`.
pub fn binomial_general(z: &ExactRational, k: u32) -> ExactRational {
    let mut num = ExactRational::one();
    for i in 0..k {
        num = num * (z - &ExactRational::from_int(i as i64));
    }
    num / ExactRational::from_bigint(factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_and_display() {
        let r = ExactRational::ratio(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(ExactRational::from_int(7).to_string(), "7/1");
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["-3/5", "7/1", "0/1", "22/7"] {
            let r: ExactRational = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!(ExactRational::from_str("1/0").is_err());
        // bare integers normalize to p/1
        assert_eq!(ExactRational::from_str("5").unwrap().to_string(), "5/1");
    }

    #[test]
    fn pochhammer_convention() {
        // forced by Hp_1[1; kappa; 1] = 1 + kappa
        let k = ExactRational::from_int(3);
        assert_eq!(shifted_pochhammer(&k, 1), ExactRational::from_int(4));
        assert_eq!(shifted_pochhammer(&k, 0), ExactRational::one());
        // Hp_2[1; kappa; 1] = (kappa+1)(kappa+2)/3 uses the t = 2 product
        assert_eq!(shifted_pochhammer(&k, 2), ExactRational::from_int(20));
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), BigInt::from(1));
        assert_eq!(double_factorial(1), BigInt::from(1));
        assert_eq!(double_factorial(5), BigInt::from(15));
        assert_eq!(double_factorial(9), BigInt::from(945));
    }

    #[test]
    fn sqrt_exact_detects_squares() {
        assert_eq!(
            ExactRational::ratio(9, 4).sqrt_exact(),
            Some(ExactRational::ratio(3, 2))
        );
        assert_eq!(ExactRational::from_int(2).sqrt_exact(), None);
        assert_eq!(ExactRational::from_int(-4).sqrt_exact(), None);
    }
}
