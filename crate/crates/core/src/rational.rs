//! Exact scalars. `Rational` is an arbitrary-precision fraction kept in lowest
//! terms with a positive denominator; `RationalComplex` pairs two of them.

use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type RationalComplex = Complex<Rational>;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    BigRational::from_integer(BigInt::from(value))
}

pub fn real(value: Rational) -> RationalComplex {
    Complex::new(value, Rational::zero())
}

pub fn creal(numer: i64, denom: i64) -> RationalComplex {
    real(rat(numer, denom))
}

pub fn czero() -> RationalComplex {
    Complex::new(Rational::zero(), Rational::zero())
}

pub fn cone() -> RationalComplex {
    Complex::new(Rational::one(), Rational::zero())
}

/// Parses `"p/q"` or `"p"` (surrounding whitespace allowed) into lowest terms.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let trimmed = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    let (numer, denom) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let numer = BigInt::from_str(numer).map_err(|_| bad())?;
    let denom = BigInt::from_str(denom).map_err(|_| bad())?;
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(numer, denom))
}

/// Comma-separated list of rationals, as used for `--alpha`.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

/// Lowest-terms text form; integers print without the `/1`.
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

pub(crate) mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// JSON form `{"re": "p/q", "im": "p/q"}`.
#[derive(Serialize, Deserialize)]
pub(crate) struct ComplexRepr {
    #[serde(with = "serde_rational")]
    re: Rational,
    #[serde(with = "serde_rational")]
    im: Rational,
}

impl From<&RationalComplex> for ComplexRepr {
    fn from(value: &RationalComplex) -> Self {
        ComplexRepr {
            re: value.re.clone(),
            im: value.im.clone(),
        }
    }
}

impl From<ComplexRepr> for RationalComplex {
    fn from(value: ComplexRepr) -> Self {
        Complex::new(value.re, value.im)
    }
}

pub(crate) mod serde_complex {
    use super::*;

    pub fn serialize<S: Serializer>(value: &RationalComplex, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr::from(value).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> std::result::Result<RationalComplex, D::Error> {
        ComplexRepr::deserialize(deserializer).map(Into::into)
    }
}

pub fn complex_to_json(value: &RationalComplex) -> serde_json::Value {
    serde_json::to_value(ComplexRepr::from(value)).expect("rational pair serializes")
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
