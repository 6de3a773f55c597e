//! Exact rationals and their text form.
//!
//! Every exponent in this crate is a [`Rational`]: an arbitrary-precision,
//! always-reduced fraction with positive denominator. The text form used on
//! every external surface is `"numerator/denominator"`, also for integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as a reduced rational. Panics on `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// Always `"p/q"`, even when `q == 1`.
pub fn to_pq(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale down first
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// 12 significant digits, the decimal companion of `to_pq` in tables.
pub fn to_decimal(r: &Rational) -> String {
    format_sig(to_f64(r), 12)
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&mag) {
        return format!("{x:.prec$e}", prec = digits.saturating_sub(1));
    }
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn is_between(x: &Rational, lo: &Rational, hi: &Rational) -> bool {
    lo <= x && x <= hi
}

pub fn is_nonneg(x: &Rational) -> bool {
    !x.is_negative()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub(crate) mod serde_pq {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::to_pq(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(to_pq(&ratio(16, 30)), "8/15");
        assert_eq!(to_pq(&int(1)), "1/1");
        assert_eq!(to_pq(&ratio(1, -2)), "-1/2");
        assert_eq!(parse("16/30").unwrap(), ratio(8, 15));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn decimal_columns() {
        assert_eq!(to_decimal(&ratio(3, 4)), "0.750000000000");
        assert_eq!(to_decimal(&ratio(55, 12756)), "0.00431169645657");
    }
}
