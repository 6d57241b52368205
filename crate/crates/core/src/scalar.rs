//! Scalar abstraction for edge weights.
//!
//! Solvers are generic over the weight type. Exact rationals are the default;
//! scaled integers come out of weight scaling, and floats are accepted for
//! quick experiments where exactness is not needed.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// A weight type the solvers can run on.
///
/// Every scalar has an exact rational value, which is what interval
/// membership and file I/O are defined against.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    /// Exact rational value of `self`. Finite floats convert exactly.
    fn to_ratio(&self) -> BigRational;

    /// Conversion back from a rational, `None` when the target type cannot
    /// hold the value (fractional value for an integer type).
    fn from_ratio(value: &BigRational) -> Option<Self>;

    /// Lossy conversion for reporting.
    fn to_f64_lossy(&self) -> f64 {
        ratio_to_f64(&self.to_ratio())
    }

    fn is_valid_weight(&self) -> bool {
        *self >= Self::zero()
    }
}

impl Scalar for BigRational {
    fn to_ratio(&self) -> BigRational {
        self.clone()
    }

    fn from_ratio(value: &BigRational) -> Option<Self> {
        Some(value.clone())
    }
}

impl Scalar for BigInt {
    fn to_ratio(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn from_ratio(value: &BigRational) -> Option<Self> {
        value.is_integer().then(|| value.to_integer())
    }
}

macro_rules! impl_int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_ratio(&self) -> BigRational {
                BigRational::from_integer(BigInt::from(*self))
            }

            fn from_ratio(value: &BigRational) -> Option<Self> {
                if value.is_integer() {
                    value.to_integer().to_string().parse().ok()
                } else {
                    None
                }
            }
        }
    )*};
}

impl_int_scalar!(i64, u64);

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_ratio(&self) -> BigRational {
                BigRational::from_float(*self).unwrap_or_else(BigRational::zero)
            }

            fn from_ratio(value: &BigRational) -> Option<Self> {
                Some(ratio_to_f64(value) as $t)
            }

            fn to_f64_lossy(&self) -> f64 {
                *self as f64
            }

            fn is_valid_weight(&self) -> bool {
                self.is_finite() && *self >= 0.0
            }
        }
    )*};
}

impl_float_scalar!(f32, f64);

pub fn ratio_to_f64(value: &BigRational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // huge numerators or denominators overflow the direct conversion
        let n = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = value.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn sum<W: Scalar>(values: impl IntoIterator<Item = W>) -> W {
    values.into_iter().fold(W::zero(), |acc, w| acc + w)
}

/// Parses `"0.3873"`, `"12"`, `"-1.5"` or `"1/3"` into an exact rational.
pub fn parse_ratio(text: &str) -> Result<BigRational, Error> {
    let text = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if text.is_empty() {
        return Err(bad());
    }
    if text.contains('/') {
        let value = BigRational::from_str(text).map_err(|_| bad())?;
        return Ok(value);
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let mut all = String::with_capacity(int_part.len() + frac_part.len());
    all.push_str(int_part);
    all.push_str(frac_part);
    let numer = BigInt::from_str(&all).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Formats a rational as a terminating decimal when one exists, otherwise as
/// `p/q`. [`parse_ratio`] reads either form back exactly.
pub fn format_ratio(value: &BigRational) -> String {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let mut twos = 0usize;
    let mut fives = 0usize;
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", value.numer(), value.denom());
    }
    let places = twos.max(fives);
    if places == 0 {
        return value.numer().to_string();
    }
    let scaled = value * BigRational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    let digits = scaled.to_integer().abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = digits.split_at(digits.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    let sign = if value.is_negative() { "-" } else { "" };
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Serde adapter storing a [`BigRational`] as a string.
pub mod ratio_string {
    use super::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_ratio(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_ratio(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`ratio_string`] for vectors.
pub mod ratio_string_vec {
    use super::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_ratio(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_ratio(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Same as [`ratio_string`] for optional values.
pub mod ratio_string_opt {
    use super::{format_ratio, parse_ratio};
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&format_ratio(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| parse_ratio(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}
