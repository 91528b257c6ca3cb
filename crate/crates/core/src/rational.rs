//! Exact rational helpers: parsing, formatting and rounding of reals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational used for every grade and coordinate.
pub type Rational = BigRational;

/// Default number of decimal digits kept when rounding irrational reals.
pub const DEFAULT_PRECISION: u32 = 12;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn pow10(exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), exp as usize)
}

/// Parses `"p/q"`, integers, decimals (`"-0.25"`) and scientific notation
/// (`"1.5e-3"`) exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(p, q));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(Error::Parse(format!("exponent out of range in {text:?}")));
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    let scale = exponent - frac.len() as i64;
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * pow10(scale as u32))
    } else {
        Rational::new(numer, pow10((-scale) as u32))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Exact decimal text (`"0.4"`) when the expansion terminates, `"p/q"`
/// otherwise.
pub fn format_decimal(value: &Rational) -> String {
    let mut denom = value.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format_rational(value);
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return value.numer().to_string();
    }
    let scaled = (value * Rational::from_integer(pow10(digits))).to_integer();
    let text = scaled.abs().to_string();
    let text = format!("{text:0>width$}", width = digits as usize + 1);
    let (whole, frac) = text.split_at(text.len() - digits as usize);
    let sign = if value.is_negative() { "-" } else { "" };
    format!("{sign}{whole}.{frac}")
}

/// Rounds `value` to the nearest multiple of `10^-digits` (ties away from zero).
pub fn round_to_digits(value: &Rational, digits: u32) -> Rational {
    let scale = Rational::from_integer(pow10(digits));
    (value * &scale).round() / scale
}

/// Converts a finite float to a rational rounded to `digits` decimal places.
pub fn rationalize(x: f64, digits: u32) -> Result<Rational> {
    let exact = Rational::from_float(x).ok_or_else(|| Error::Domain(format!("non-finite real {x}")))?;
    Ok(round_to_digits(&exact, digits))
}

/// Square root of a non-negative rational, rounded to `digits` decimal places.
///
/// Exact whenever the true root is a multiple of `10^-digits`.
pub fn sqrt_rounded(value: &Rational, digits: u32) -> Result<Rational> {
    if value.is_negative() {
        return Err(Error::Domain(format!("square root of negative {}", format_rational(value))));
    }
    // floor(sqrt(v * 100^d)) computed on integers, then a half-step correction for rounding.
    let scale = pow10(digits);
    let scaled = value * Rational::from_integer(&scale * &scale) * int(4);
    let floor = scaled.floor().to_integer();
    let twice = floor.sqrt();
    // twice = floor(2 * sqrt(v) * 10^d); round half up
    let rounded = (twice + BigInt::one()) / BigInt::from(2);
    Ok(Rational::new(rounded, scale))
}

/// Lossy conversion for display-only purposes.
pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
