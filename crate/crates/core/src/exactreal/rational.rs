//! Arbitrary-precision rationals and the dyadic helpers the real engine leans on.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` for any sign of `e`.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        Rational::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

/// Smallest `k` with `q <= 2^k`, for `q > 0`.
pub fn ceil_log2(q: &Rational) -> i64 {
    assert!(q.is_positive(), "ceil_log2 of non-positive rational");
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    // bits(num) - bits(den) is within one of log2(q).
    let mut k = num.bits() as i64 - den.bits() as i64;
    while pow2(k) < *q {
        k += 1;
    }
    while k > i64::MIN + 1 && pow2(k - 1) >= *q {
        k -= 1;
    }
    k
}

/// `m / 2^bits` in lowest terms, without a gcd.
pub fn dyadic(m: BigInt, bits: u32) -> Rational {
    if m.is_zero() {
        return Rational::zero();
    }
    let tz = m.trailing_zeros().unwrap_or(0).min(bits as u64);
    Rational::new_raw(
        m >> tz as usize,
        BigInt::one() << (bits as u64 - tz) as usize,
    )
}

/// `floor(q * 2^bits)`.
pub fn scaled_floor(q: &Rational, bits: u32) -> BigInt {
    (q.numer() << bits as usize).div_floor(q.denom())
}

/// `ceil(q * 2^bits)`.
pub fn scaled_ceil(q: &Rational, bits: u32) -> BigInt {
    -((-(q.numer() << bits as usize)).div_floor(q.denom()))
}

/// Largest dyadic `m / 2^bits` that is `<= q`.
pub fn round_down(q: &Rational, bits: u32) -> Rational {
    dyadic(scaled_floor(q, bits), bits)
}

/// Smallest dyadic `m / 2^bits` that is `>= q`.
pub fn round_up(q: &Rational, bits: u32) -> Rational {
    dyadic(scaled_ceil(q, bits), bits)
}

pub fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

/// Floor of the square root of a non-negative integer.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Renders as `p/q` in decimal digits; the denominator is always written.
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Accepts `p/q`, an integer, or a finite decimal such as `-0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational literal: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let d = num_traits::pow(BigInt::from(10u32), frac.len());
    let q = Rational::new(n, d);
    Some(if neg { -q } else { q })
}

pub fn to_f64(q: &Rational) -> f64 {
    // Scale to keep precision for very small/large values.
    let n = q.numer();
    let d = q.denom();
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
        _ => {
            let shift = n.bits() as i64 - d.bits() as i64;
            let scaled = q / pow2(shift);
            let (a, b) = (
                scaled.numer().to_f64().unwrap_or(0.0),
                scaled.denom().to_f64().unwrap_or(1.0),
            );
            (a / b) * 2f64.powi(shift as i32)
        }
    }
}

pub fn is_dyadic(q: &Rational) -> bool {
    let d = q.denom();
    d.sign() == Sign::Plus && (d & (d - BigInt::one())).is_zero()
}

/// `|q|` as a rational.
pub fn abs(q: &Rational) -> Rational {
    q.abs()
}

/// Integer floor division helper used by the dense enumeration.
pub fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}
