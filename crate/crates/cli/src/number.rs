//! Exact parsing of numeric flag values.

use meanlab_core::rational::{self, Rational};
use num_bigint::BigInt;

/// Parses `p/q`, an integer, or a decimal with optional exponent
/// (`0.25`, `1e-9`, `-2.5E3`) into the exact rational it denotes.
pub fn parse_number(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some(r) = rational::parse(text) {
        return Some(r);
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if ip.is_empty() && fp.is_empty() || !(ip.chars().chain(fp.chars())).all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits: BigInt = format!("{ip}{fp}").parse().ok()?;
    let scale = exp - i32::try_from(fp.len()).ok()?;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(digits * ten.pow(scale.unsigned_abs()))
    } else {
        Rational::new(digits, ten.pow(scale.unsigned_abs()))
    };
    Some(if neg { -value } else { value })
}
