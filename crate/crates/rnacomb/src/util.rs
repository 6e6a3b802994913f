//! Numeric helpers: exact-decimal parsing and big-ratio conversion.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Convert num/den to f64 by scaled integer division, so that ratios of
/// integers far beyond f64 range (counts grow like rho^-n) still convert
/// correctly. Truncation error is ~2^-63 relative.
pub fn big_ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // shift so the integer quotient carries ~64 significant bits
    let e = (64 + db - nb).max(0) as u64;
    let q = (num << e) / den;
    let qf = q.to_f64().expect("quotient fits after scaling");
    qf * (-(e as f64)).exp2()
}

/// Same conversion for a (nonnegative or negative) exact rational.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    let num = q.numer();
    let den = q.denom();
    let sign = if (num.is_negative()) != (den.is_negative()) { -1.0 } else { 1.0 };
    sign * big_ratio_to_f64(&num.abs().to_biguint().unwrap(), &den.abs().to_biguint().unwrap())
}

/// Parse a plain decimal string ("0.412", "1", ".5") into an exact rational.
/// Scientific notation and signs are rejected so that downstream floor
/// computations stay bit-for-bit reproducible.
pub fn parse_decimal_rational(text: &str) -> Result<BigRational, Error> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Ratio("empty ratio".into()));
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Ratio(format!("not a decimal number: {text:?}")));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::Ratio(format!(
            "not a plain decimal number (digits and one '.' only): {text:?}"
        )));
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = digits.parse().expect("digit string");
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(num, den))
}

/// Exact decimal rendering of a nonnegative rational, up to `max_dp` places
/// (round half up beyond that), with trailing zeros trimmed.
pub fn decimal_string(q: &BigRational, max_dp: usize) -> String {
    let mut s = decimal_string_fixed(q, max_dp);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Fixed-width variant of [`decimal_string`]: always exactly `dp` decimals.
pub fn decimal_string_fixed(q: &BigRational, dp: usize) -> String {
    assert!(!q.is_negative());
    let scale = BigInt::from(10u32).pow(dp as u32);
    let scaled = q * BigRational::from_integer(scale.clone());
    // round half up
    let rounded = (scaled * BigRational::from_integer(2.into())
        + BigRational::from_integer(1.into()))
    .to_integer()
    .div_floor(&BigInt::from(2));
    let (int, frac) = rounded.div_rem(&scale);
    if dp == 0 {
        format!("{int}")
    } else {
        format!("{int}.{frac:0width$}", width = dp)
    }
}

/// Fixed-point rendering with round-half-up, e.g. dp = 4 for 0.3113.
pub fn round_half_up_string(x: f64, dp: usize) -> String {
    let scale = 10f64.powi(dp as i32);
    let v = (x * scale + 0.5).floor() as i64;
    let int = v.div_euclid(10i64.pow(dp as u32));
    let frac = v.rem_euclid(10i64.pow(dp as u32));
    format!("{int}.{frac:0width$}", width = dp)
}
