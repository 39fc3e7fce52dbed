//! Exact rationals used for every positivity test.
//!
//! Model files carry rationals as strings, either `p/q` or an exact decimal
//! such as `0.25`. Binary floats never enter the exact path.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Rational(text.to_string());
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = parse_int(num.trim()).ok_or_else(bad)?;
        let den: BigInt = parse_int(den.trim()).ok_or_else(bad)?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut digits = String::with_capacity(int_part.len() + frac_part.len());
    digits.push_str(int_part);
    digits.push_str(frac_part);
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10u8), frac_part.len());
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Renders `r` as `p/q`, or as a bare integer when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_positive() {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    })
}

pub fn from_ints(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/4").unwrap(), from_ints(1, 4));
        assert_eq!(parse_rational(" 2/8 ").unwrap(), from_ints(1, 4));
        assert_eq!(parse_rational("0.25").unwrap(), from_ints(1, 4));
        assert_eq!(parse_rational(".5").unwrap(), from_ints(1, 2));
        assert_eq!(parse_rational("1").unwrap(), one());
        assert_eq!(parse_rational("-3/6").unwrap(), from_ints(-1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), from_ints(-1, 8));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for s in ["1e-3", "1/0", "", ".", "abc", "1/2/3", "0x10", "1.5.2", "--1"] {
            assert!(parse_rational(s).is_err(), "{s} accepted");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format_rational(&from_ints(2, 8)), "1/4");
        assert_eq!(format_rational(&from_ints(3, 1)), "3");
    }
}
