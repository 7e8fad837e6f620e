//! Exact rationals, their `{num, den}` wire form and textual parsing.

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn from_usize(n: usize) -> Rational {
    Rational::from_integer(n as i64)
}

/// `a / b` for counts.
pub fn frac(a: usize, b: usize) -> Rational {
    Rational::new(a as i64, b as i64)
}

/// Lowest-terms `{num, den}` record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: i64,
    pub den: i64,
}

impl From<Rational> for RationalRepr {
    fn from(r: Rational) -> Self {
        RationalRepr {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl TryFrom<RationalRepr> for Rational {
    type Error = Error;
    fn try_from(r: RationalRepr) -> Result<Self> {
        if r.den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rational::new(r.num, r.den))
    }
}

/// `#[serde(with = "crate::rational::serde_repr")]`
pub mod serde_repr {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalRepr::from(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        Rational::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Parses `"3"`, `"-1/32"` or an exact decimal like `"0.25"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational `{text}`"));
    if let Some((n, d)) = t.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, fracpart)) = t.split_once('.') {
        if fracpart.is_empty() || !fracpart.bytes().all(|b| b.is_ascii_digit()) || fracpart.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_val: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(fracpart.len() as u32);
        let f: i64 = fracpart.parse().map_err(|_| bad())?;
        let mag = Rational::new(int_val.abs() * den + f, den);
        return Ok(if negative { -mag } else { mag });
    }
    t.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Nearest integer, halves rounded away from zero.
pub fn nearest_integer(r: Rational) -> i64 {
    r.round().to_integer()
}

pub fn abs_diff(a: Rational, b: Rational) -> Rational {
    (a - b).abs()
}

pub fn is_positive(r: Rational) -> bool {
    r > Rational::zero()
}
