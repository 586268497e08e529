//! Exact rational scalars: parsing, printing and decimal approximation.
//!
//! The scalar type is `num_rational::BigRational`, which already keeps values
//! in canonical reduced form with a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

/// Shorthand for a rational from an integer.
pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Shorthand for a rational `n/d`.
pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sign of a rational as -1, 0 or +1.
pub fn q_sign(x: &Q) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Parses `p`, `-p` or `p/q` with an arbitrary-precision integer numerator
/// and a positive integer denominator.
pub fn parse_rational(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("malformed rational `{s}`"))?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| format!("malformed rational `{s}`"))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Q::new(n, d))
}

/// Canonical string form: `p` for integers, `p/q` otherwise.
pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Decimal expansion of `x` with `digits` fractional digits, truncated toward
/// zero. Computed with integer arithmetic only.
pub fn decimal_string(x: &Q, digits: u32) -> String {
    let neg = x.is_negative();
    let abs = x.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let digits = digits as usize;
    let s = scaled.to_string();
    let (int_part, frac_part) = if s.len() > digits {
        let (i, f) = s.split_at(s.len() - digits);
        (i.to_string(), f.to_string())
    } else {
        ("0".to_string(), format!("{:0>width$}", s, width = digits))
    };
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}
