//! Exact rationals and the scalar abstraction shared by exact and floating
//! evaluation paths.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseRationalError;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let bad = || ParseRationalError(s.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => BigInt::from_str(digits).map_err(|_| bad())?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = Rational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// Canonical `"p/q"` form, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serde adapter storing a rational as its canonical string.
pub mod serde_rational {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_rational_vec {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rational(s).map_err(D::Error::custom))
            .collect()
    }
}

/// Serde adapter for `Option<Rational>`; `None` is `null`.
pub mod serde_rational_opt {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// Field elements the blending, tautological and Horn maps are evaluated over.
///
/// Implemented for [`Rational`] (exact) and `f64` (numerics). Formulas are
/// written once against this trait so both kinds follow the same code path.
pub trait Scalar:
    Clone
    + PartialOrd
    + fmt::Debug
    + num_traits::Num
    + std::ops::Neg<Output = Self>
    + for<'a> std::ops::AddAssign<&'a Self>
    + for<'a> std::ops::MulAssign<&'a Self>
{
    fn from_int(n: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn as_f64(&self) -> f64;

    fn abs_val(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Integer power with `0^0 = 1`; negative exponents invert.
    fn powi_exact(&self, e: i64) -> Self {
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc *= self;
        }
        if e < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }
}

impl Scalar for Rational {
    fn from_int(n: i64) -> Self {
        rat(n)
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn as_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &Rational) -> Self {
        rational_to_f64(r)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn powi_exact(&self, e: i64) -> Self {
        self.powi(e as i32)
    }
}

/// Renders a slice of rationals as `[a, b, c]` for diagnostics.
pub struct DisplayRationals<'a>(pub &'a [Rational]);

impl fmt::Display for DisplayRationals<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&format_rational(r))?;
        }
        f.write_str("]")
    }
}
