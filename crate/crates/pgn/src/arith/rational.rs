use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, Error> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    /// Panics on a zero denominator; for literals in code and tests.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
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
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn floor(&self) -> Self {
        Rational(self.0.floor())
    }

    pub fn ceil(&self) -> Self {
        Rational(self.0.ceil())
    }

    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Checked division.
    pub fn checked_div(&self, other: &Rational) -> Result<Self, Error> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Rational(&self.0 / &other.0))
    }

    /// True when `self` is an integer multiple of `delta`.
    pub fn is_multiple_of(&self, delta: &Rational) -> bool {
        if delta.is_zero() {
            return self.is_zero();
        }
        (&self.0 / &delta.0).is_integer()
    }

    /// Largest positive rational dividing every input; `None` when all inputs are zero.
    pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        let mut any = false;
        for v in values {
            if v.is_zero() {
                continue;
            }
            any = true;
            let (n, d) = (v.numer().abs(), v.denom().clone());
            num = num.gcd(&n);
            den = den.lcm(&d);
        }
        if !any {
            return None;
        }
        Some(Rational(BigRational::new(num, den)))
    }

    /// Decimal rendering rounded half away from zero to `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let a = self.0.abs();
        let scaled = a * BigRational::from_integer(scale.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let r = (scaled + half).floor().to_integer();
        let (ip, fp) = r.div_rem(&scale);
        let neg = self.is_negative() && !r.is_zero();
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&ip.to_string());
        if digits > 0 {
            let f = fp.to_string();
            out.push('.');
            for _ in f.len()..digits {
                out.push('0');
            }
            out.push_str(&f);
        }
        out
    }

    pub fn min_of(a: &Rational, b: &Rational) -> Rational {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max_of(a: &Rational, b: &Rational) -> Rational {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

fn parse_int(s: &str, allow_sign: bool) -> Result<BigInt, Error> {
    let (neg, digits) = match s.as_bytes().first() {
        Some(b'-') if allow_sign => (true, &s[1..]),
        Some(b'+') if allow_sign => (false, &s[1..]),
        _ => (false, s),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("invalid integer {s:?}")));
    }
    let v = BigInt::parse_bytes(digits.as_bytes(), 10)
        .ok_or_else(|| Error::Parse(format!("invalid integer {s:?}")))?;
    Ok(if neg { -v } else { v })
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.split_once('/') {
            None => Ok(Rational::from_bigint(parse_int(s, true)?)),
            Some((p, q)) => {
                let p = parse_int(p, true)?;
                let q = parse_int(q, false)?;
                if q.sign() != Sign::Plus {
                    return Err(Error::Parse(format!("denominator must be positive in {s:?}")));
                }
                Rational::new(p, q)
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_bigint(BigInt::from(v)))
            }
        }
        d.deserialize_any(V)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                Rational($tr::$m(&self.0, &o.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational($tr::$m(self.0, o.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, o: &Rational) -> Rational {
                Rational($tr::$m(self.0, &o.0))
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, o: Rational) -> Rational {
                Rational($tr::$m(&self.0, o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
// Division by zero panics, as for the underlying type; use `checked_div` on untrusted data.
binop!(Div, div);

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

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, o: &Rational) {
        self.0 += &o.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, o: &Rational) {
        self.0 -= &o.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, o: &i64) -> bool {
        *self == Rational::int(*o)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, o: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::int(*o)))
    }
}

/// Shorthand for `Rational::frac`.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::frac(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!("2/4".parse::<Rational>().unwrap().to_string(), "1/2");
        assert_eq!("-6/3".parse::<Rational>().unwrap().to_string(), "-2");
        assert_eq!("+7".parse::<Rational>().unwrap(), Rational::int(7));
        assert_eq!("0/5".parse::<Rational>().unwrap().to_string(), "0");
        for bad in ["", "/", "1/", "/2", "1/0", "1/-2", "a", "1.5", "1/2/3", " 1", "--1", "1/+2"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad}");
        }
    }

    #[test]
    fn decimal() {
        assert_eq!(q(1, 3).to_decimal(12), "0.333333333333");
        assert_eq!(q(2, 3).to_decimal(12), "0.666666666667");
        assert_eq!(q(-1, 7).to_decimal(4), "-0.1429");
        assert_eq!(Rational::int(5).to_decimal(2), "5.00");
        assert_eq!(q(-1, 10_000_000).to_decimal(3), "0.000");
    }

    #[test]
    fn gcd_and_multiples() {
        let g = Rational::gcd_all([q(1, 2), q(3, 4), Rational::int(2)].iter()).unwrap();
        assert_eq!(g, q(1, 4));
        assert!(q(3, 4).is_multiple_of(&q(1, 4)));
        assert!(!q(3, 4).is_multiple_of(&q(1, 2)));
        assert_eq!(Rational::gcd_all([Rational::zero()].iter()), None);
    }

    #[test]
    fn json_forms() {
        let r: Rational = serde_json::from_str("\"3/6\"").unwrap();
        assert_eq!(r, q(1, 2));
        let r: Rational = serde_json::from_str("-4").unwrap();
        assert_eq!(r, Rational::int(-4));
        assert_eq!(serde_json::to_string(&q(-2, 6)).unwrap(), "\"-1/3\"");
        assert!(serde_json::from_str::<Rational>("1.5").is_err());
    }
}
