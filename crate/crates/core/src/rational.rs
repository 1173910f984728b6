//! Exact rational helpers.
//!
//! All quantities in this crate are [`Rational`]s. `BigRational` keeps its
//! values reduced with a positive denominator after every operation, so no
//! decision anywhere depends on floating point.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// `numer / denom` as a reduced rational. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// True when the value is stored in lowest terms with a positive denominator.
pub fn is_normalized(value: &Rational) -> bool {
    value.denom().is_positive() && value.numer().gcd(value.denom()).is_one()
}

/// True when the value has a terminating decimal expansion.
pub fn has_finite_decimal(value: &Rational) -> bool {
    let mut d = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&d % &two).is_zero() {
        d /= &two;
    }
    while (&d % &five).is_zero() {
        d /= &five;
    }
    d.is_one()
}

/// Exact decimal expansion, or `None` when the expansion does not terminate.
pub fn to_decimal(value: &Rational) -> Option<String> {
    if !has_finite_decimal(value) {
        return None;
    }
    let ten = BigInt::from(10);
    let mut scale = 0usize;
    let mut scaled = value.clone();
    while !scaled.is_integer() {
        scaled *= Rational::from_integer(ten.clone());
        scale += 1;
    }
    let digits = scaled.to_integer();
    let negative = digits.is_negative();
    let mut text = alloc::format!("{}", digits.abs());
    if scale > 0 {
        while text.len() <= scale {
            text.insert(0, '0');
        }
        text.insert(text.len() - scale, '.');
    }
    if negative {
        text.insert(0, '-');
    }
    Some(text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalParseError(pub String);

impl fmt::Display for RationalParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed rational '{}'", self.0)
    }
}

impl core::error::Error for RationalParseError {}

/// Parses `<int>` or `<int>/<posint>`.
pub fn parse_rational(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.into());
    let parse_int = |s: &str| -> Option<BigInt> {
        let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse::<BigInt>().ok()
    };
    match text.split_once('/') {
        None => parse_int(text).map(Rational::from_integer).ok_or_else(err),
        Some((n, d)) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(err());
            }
            let numer = parse_int(n).ok_or_else(err)?;
            let denom = parse_int(d).ok_or_else(err)?;
            if denom.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Parses a plain decimal such as `-12`, `0.375` or `.5` exactly.
pub fn parse_decimal(text: &str) -> Result<Rational, RationalParseError> {
    let err = || RationalParseError(text.into());
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() || !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    let mut digits = String::from(whole);
    digits.push_str(frac);
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("12").unwrap(), int(12));
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("/2").is_err());
    }

    #[test]
    fn decimal_expansion() {
        assert_eq!(to_decimal(&rat(1, 2)).as_deref(), Some("0.5"));
        assert_eq!(to_decimal(&rat(-3, 8)).as_deref(), Some("-0.375"));
        assert_eq!(to_decimal(&rat(1, 100)).as_deref(), Some("0.01"));
        assert_eq!(to_decimal(&int(-14)).as_deref(), Some("-14"));
        assert_eq!(to_decimal(&rat(1, 3)), None);
    }

    #[test]
    fn decimal_parsing() {
        assert_eq!(parse_decimal("-0.375").unwrap(), rat(-3, 8));
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_decimal("+12").unwrap(), int(12));
        assert_eq!(parse_decimal("3.").unwrap(), int(3));
        assert!(parse_decimal(".").is_err());
        assert!(parse_decimal("1/2").is_err());
        assert!(parse_decimal("1e3").is_err());
    }

    #[test]
    fn arithmetic_stays_normalized() {
        let mut acc = Rational::zero();
        for d in 1..40 {
            acc += rat(d, 2 * d + 2);
            acc -= rat(1, d);
            assert!(is_normalized(&acc));
        }
    }
}
