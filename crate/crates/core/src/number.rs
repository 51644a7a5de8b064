//! Exact rational helpers shared by the reader, the printer, and the JSON
//! encoders.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Reads a numeric literal: integers, `a/b` fractions and finite decimals.
/// Returns `None` when the text is not shaped like a number at all, and
/// `Some(Err(..))` when it is number-shaped but malformed (e.g. `1/0`).
pub fn parse_literal(text: &str) -> Option<Result<Rational, String>> {
    let (neg, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let first = body.chars().next()?;
    if !(first.is_ascii_digit() || (first == '.' && body[1..].starts_with(|c: char| c.is_ascii_digit()))) {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let (Some(n), Some(d)) = (digits(n), digits(d)) else {
            return Some(Err(format!("bad number literal: {text}")));
        };
        if d.is_zero() {
            return Some(Err(format!("bad number literal: {text} (zero denominator)")));
        }
        BigRational::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        let whole_part = if whole.is_empty() { Some(BigInt::zero()) } else { digits(whole) };
        let frac_part = if frac.is_empty() { Some(BigInt::zero()) } else { digits(frac) };
        let (Some(w), Some(f)) = (whole_part, frac_part) else {
            return Some(Err(format!("bad number literal: {text}")));
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        BigRational::new(w * &scale + f, scale)
    } else {
        match digits(body) {
            Some(n) => BigRational::from_integer(n),
            None => return Some(Err(format!("bad number literal: {text}"))),
        }
    };
    Some(Ok(if neg { -value } else { value }))
}

fn digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Source-level rendering: integers plainly, terminating decimals as
/// decimals, everything else as `a/b`. Re-reads to the same value.
pub fn format_literal(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    match decimal_digits(r) {
        Some(s) => s,
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

/// Wire rendering: integers as-is, otherwise `num/den`.
pub fn format_ratio(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn decimal_digits(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = (r.numer() * &scale) / r.denom();
    let neg = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (whole, frac) = digits.split_at(digits.len() - places);
    let frac = frac.trim_end_matches('0');
    Some(format!("{}{}.{}", if neg { "-" } else { "" }, whole, frac))
}

/// Nearest `f64`, used only for reporting and for non-right-angle rotation.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// JSON form of a number: an integer when whole and within `i64`,
/// otherwise the `num/den` string.
pub fn to_json(r: &Rational) -> serde_json::Value {
    match r.is_integer().then(|| r.numer().to_i64()).flatten() {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::String(format_ratio(r)),
    }
}

/// Accepts a JSON integer, a JSON decimal (read through its decimal text, so
/// `0.1` is exactly one tenth), or a string holding any numeric literal.
pub fn from_json(v: &serde_json::Value) -> Result<Rational, String> {
    let text = match v {
        serde_json::Value::Number(n) => n.to_string(),
        serde_json::Value::String(s) => s.trim().to_string(),
        other => return Err(format!("expected a number, found {other}")),
    };
    match parse_literal(&text) {
        Some(r) => r,
        None => Err(format!("`{text}` is not a number")),
    }
}

/// `#[serde(with = "number::serde_rational")]` for `Rational` fields.
pub mod serde_rational {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        super::to_json(r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        super::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        assert_eq!(to_json(&int(10)), serde_json::json!(10));
        assert_eq!(to_json(&ratio(99, 10)), serde_json::json!("99/10"));
        assert_eq!(from_json(&serde_json::json!("99/10")).unwrap(), ratio(99, 10));
        assert_eq!(from_json(&serde_json::json!(0.1)).unwrap(), ratio(1, 10));
        assert_eq!(from_json(&serde_json::json!(7)).unwrap(), int(7));
        assert!(from_json(&serde_json::json!(true)).is_err());
        assert!(from_json(&serde_json::json!("ten")).is_err());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_literal("-32.1").unwrap().unwrap(), ratio(-321, 10));
        assert_eq!(parse_literal("0.5").unwrap().unwrap(), ratio(1, 2));
        assert_eq!(parse_literal(".25").unwrap().unwrap(), ratio(1, 4));
        assert_eq!(parse_literal("3.").unwrap().unwrap(), int(3));
    }

    #[test]
    fn fractions_and_integers() {
        assert_eq!(parse_literal("1/3").unwrap().unwrap(), ratio(1, 3));
        assert_eq!(parse_literal("-4/6").unwrap().unwrap(), ratio(-2, 3));
        assert_eq!(parse_literal("+17").unwrap().unwrap(), int(17));
        assert!(parse_literal("1/0").unwrap().is_err());
        assert!(parse_literal("12abc").unwrap().is_err());
    }

    #[test]
    fn non_numbers() {
        assert!(parse_literal("-").is_none());
        assert!(parse_literal("rect-area").is_none());
        assert!(parse_literal("+").is_none());
        assert!(parse_literal("...").is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(format_literal(&int(14)), "14");
        assert_eq!(format_literal(&ratio(99, 10)), "9.9");
        assert_eq!(format_literal(&ratio(-321, 10)), "-32.1");
        assert_eq!(format_literal(&ratio(-1, 20)), "-0.05");
        assert_eq!(format_literal(&ratio(1, 3)), "1/3");
        assert_eq!(format_ratio(&ratio(99, 10)), "99/10");
        assert_eq!(format_ratio(&int(-3)), "-3");
    }
}
