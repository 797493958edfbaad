//! Exact rational arithmetic and the exact-or-float scalar used by the
//! interval machinery.
//!
//! All classification decisions are made on [`Rational`] values so that no
//! verdict ever depends on a floating-point epsilon. Interval descent also
//! runs on rationals whenever every map in a system has exact coefficients;
//! systems containing formula-backed maps fall back to `f64` via [`Scalar`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
///
/// Arbitrary precision is required: descent composites deepen to 64 maps and
/// matrix products to 24+, whose entries grow a few bits per level and would
/// overflow any fixed-width representation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` with `den != 0`.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Number {
                text: format!("{num}/{den}"),
                msg: "denominator is zero".into(),
            });
        }
        Ok(Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Number {
                text: format!("{num}/{den}"),
                msg: "denominator is zero".into(),
            });
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// Exact conversion: every finite `f64` is a dyadic rational.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational)
    }

    /// Nearest `f64`. Values produced under the crate's depth caps stay far
    /// inside `f64` range (numerator/denominator below ~2^500).
    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) if v.is_finite() => v,
            _ => {
                // Fallback for operands outside direct conversion range:
                // split off binary exponents and divide 54-bit prefixes.
                let (n, d) = (self.0.numer(), self.0.denom());
                if n.is_zero() {
                    return 0.0;
                }
                let nb = n.bits() as i64;
                let db = d.bits() as i64;
                let shift_n = (nb - 54).max(0);
                let shift_d = (db - 54).max(0);
                let top_n = (n >> shift_n).to_f64().unwrap_or(f64::NAN);
                let top_d = (d >> shift_d).to_f64().unwrap_or(f64::NAN);
                (top_n / top_d) * 2f64.powi((shift_n - shift_d) as i32)
            }
        }
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
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::Domain("zero to a negative power".into()));
        }
        Ok(Rational(self.0.pow(exp)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
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

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
// Division panics on a zero divisor (as the underlying type does); call
// sites that cannot prove the divisor nonzero use `recip` instead.
rational_binop!(Div, div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
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
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q`, an integer, or a plain decimal literal (`-0.25`).
    /// The U+2212 minus sign is treated as `-`.
    fn from_str(s: &str) -> Result<Self> {
        let text = s.trim().replace('\u{2212}', "-");
        let err = |msg: &str| Error::Number {
            text: s.to_string(),
            msg: msg.to_string(),
        };
        if text.is_empty() {
            return Err(err("empty"));
        }
        if let Some((n, d)) = text.split_once('/') {
            let num: BigInt = n.trim().parse().map_err(|_| err("bad numerator"))?;
            let den: BigInt = d.trim().parse().map_err(|_| err("bad denominator"))?;
            if den.is_zero() {
                return Err(err("denominator is zero"));
            }
            return Ok(Rational(BigRational::new(num, den)));
        }
        if let Some((int_part, frac_part)) = text.split_once('.') {
            let (sign, int_digits) = match int_part.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, int_part),
            };
            let int_digits = if int_digits.is_empty() { "0" } else { int_digits };
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(err("bad decimal literal"));
            }
            let whole: BigInt = int_digits.parse().map_err(|_| err("bad decimal literal"))?;
            let frac: BigInt = frac_part.parse().map_err(|_| err("bad decimal literal"))?;
            let scale = BigInt::from(10).pow(frac_part.len() as u32);
            let value = whole * &scale + frac;
            return Ok(Rational(BigRational::new(value * BigInt::from(sign), scale)));
        }
        let n: BigInt = text.parse().map_err(|_| err("bad integer"))?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A number that is either exact or an `f64` approximation.
///
/// Systems whose four maps all have rational coefficients run the interval
/// machinery entirely on `Exact` values; any formula-backed map demotes the
/// computation to `Approx`. Mixing the two promotes to `Approx`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn zero(exact: bool) -> Self {
        if exact {
            Scalar::Exact(Rational::zero())
        } else {
            Scalar::Approx(0.0)
        }
    }

    pub fn one(exact: bool) -> Self {
        if exact {
            Scalar::Exact(Rational::one())
        } else {
            Scalar::Approx(1.0)
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64(),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    /// Demote to the float representation.
    pub fn approx(&self) -> Scalar {
        Scalar::Approx(self.to_f64())
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(v) => Scalar::Approx(v.abs()),
        }
    }

    fn binop(
        &self,
        rhs: &Scalar,
        exact: impl Fn(&Rational, &Rational) -> Rational,
        approx: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Approx(approx(self.to_f64(), rhs.to_f64())),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a + b, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a - b, |a, b| a - b)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a * b, |a, b| a * b)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.binop(rhs, |a, b| a / b, |a, b| a / b)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.partial_cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Approx(v) => write!(f, "{v}"),
        }
    }
}
