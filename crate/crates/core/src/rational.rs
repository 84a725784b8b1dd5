//! Parsing and formatting helpers for exact rational scalars.
//!
//! Accepted input forms: integers (`"3"`, `"-7"`), fractions (`"3/4"`,
//! `"-9/2"`), and finite decimals (`"0.25"`, `"-1.5"`), all parsed exactly.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Error for a string that is not a valid rational literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
}

impl core::fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "invalid rational literal {:?}", self.input)
    }
}

fn parse_bigint(s: &str) -> Option<BigInt> {
    if s.is_empty() {
        return None;
    }
    s.parse::<BigInt>().ok()
}

/// Parses `"p/q"`, `"p.q"`, or plain integer text into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n = parse_bigint(num.trim()).ok_or_else(err)?;
        let d = parse_bigint(den.trim()).ok_or_else(err)?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        // Sign lives on the integer part; the fraction digits must be bare.
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.trim_start().starts_with('-');
        let whole = if int_part == "-" || int_part.is_empty() {
            BigInt::zero()
        } else {
            parse_bigint(int_part).ok_or_else(err)?
        };
        let digits = parse_bigint(frac_part).ok_or_else(err)?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Q::new(digits, scale);
        let whole = Q::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    parse_bigint(t).map(Q::from_integer).ok_or_else(err)
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        let mut s = q.numer().to_string();
        s.push('/');
        s.push_str(&q.denom().to_string());
        s
    }
}

/// Nearest-f64 view of an exact rational.
pub fn to_f64(q: &Q) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Convenience constructor for small rationals.
pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for integers.
pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `1/2^k` as an exact rational.
pub fn pow2(k: i64) -> Q {
    let two = Q::from_integer(BigInt::from(2));
    let mut out = Q::one();
    if k >= 0 {
        for _ in 0..k {
            out *= &two;
        }
    } else {
        for _ in 0..(-k) {
            out /= &two;
        }
    }
    out
}
