//! Exact rational scalars and the few helpers the engine needs on top of
//! `num-rational`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn uint(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-e` exactly.
pub fn pow2_neg(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e as usize)
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn floor_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_int(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

pub fn to_f64(x: &Rational) -> f64 {
    // Scale down big operands before the float division so neither side
    // overflows to infinity.
    let n = x.numer();
    let d = x.denom();
    let (nb, db) = (n.bits() as i64, d.bits() as i64);
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
    if df == 0.0 {
        // denominator vanished under the shift: |x| is astronomically large
        return if n.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    nf / df
}

/// Exact conversion of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn min(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn abs(a: &Rational) -> Rational {
    a.abs()
}

/// Parses `-12`, `3/4` or `-7/2`. Whitespace is not accepted.
pub fn parse(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let n = BigInt::from_str(num).ok()?;
    let d = match den {
        Some(d) if d.starts_with('-') || d.starts_with('+') => return None,
        Some(d) => BigInt::from_str(d).ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion correctly rounded (half away from zero) to `places`
/// digits after the point, trailing zeros trimmed.
pub fn to_decimal(x: &Rational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = x * Rational::from_integer(scale.clone());
    let magnitude = ((scaled.abs() * int(2) + int(1)) / int(2)).floor();
    let r = if scaled.is_negative() {
        -magnitude
    } else {
        magnitude
    };
    let q = r.to_integer();
    let neg = q.is_negative();
    let digits = q.abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (ip, fp) = padded.split_at(padded.len() - places);
    let fp = fp.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if fp.is_empty() {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Integer square root floor for nonnegative `n`.
pub fn isqrt(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    n.sqrt()
}

pub fn is_zero(x: &Rational) -> bool {
    x.is_zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

/// Sum by balanced pairwise splitting; much faster than a left fold when
/// denominators grow.
pub fn sum(xs: &[Rational]) -> Rational {
    match xs.len() {
        0 => zero(),
        1 => xs[0].clone(),
        n => sum(&xs[..n / 2]) + sum(&xs[n / 2..]),
    }
}
