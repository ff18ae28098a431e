//! Arithmetic, transcendental functions and semi-decidable comparison.

use num_bigint::{BigInt, BigUint};
use std::sync::Mutex;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::creal::CReal;
use super::interval::Interval;
use super::rational::{
    ceil_log2, dyadic, int, pow2, round_down, round_up, scaled_ceil, scaled_floor, Rational,
};
use crate::error::{DivergeReason, Error, Result};

/// Default number of refinement rounds for sign certification and comparisons.
pub const DEFAULT_FUEL: u32 = 64;

/// Outcome of a fuel-bounded comparison; `Undecided` is the observable
/// stand-in for divergence on equal inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Undecided,
}

/// Precision queried at refinement round `i` of a semi-decision.
pub fn refinement_precision(round: u32) -> u32 {
    4 * (round + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

pub fn arith(op: ArithOp, x: &CReal, y: &CReal) -> CReal {
    match op {
        ArithOp::Add => add(x, y),
        ArithOp::Sub => sub(x, y),
        ArithOp::Mul => mul(x, y),
        ArithOp::Neg => neg(x),
    }
}

fn exact_pair<'a>(x: &'a CReal, y: &'a CReal) -> Option<(&'a Rational, &'a Rational)> {
    Some((x.exact()?, y.exact()?))
}

pub fn add(x: &CReal, y: &CReal) -> CReal {
    if let Some((a, b)) = exact_pair(x, y) {
        return CReal::from_rational(a + b);
    }
    let (x, y) = (x.clone(), y.clone());
    CReal::from_fn(move |n| Ok(x.approx(n + 2)? + y.approx(n + 2)?))
}

pub fn neg(x: &CReal) -> CReal {
    if let Some(a) = x.exact() {
        return CReal::from_rational(-a);
    }
    let x = x.clone();
    CReal::from_fn(move |n| Ok(-x.approx(n)?))
}

pub fn sub(x: &CReal, y: &CReal) -> CReal {
    add(x, &neg(y))
}

/// `|x_0| + 2`, a bound on `|x|` and on every `|x_n|`.
fn magnitude_bound(x: &CReal) -> Result<Rational> {
    Ok(x.approx(0)?.abs() + int(2))
}

pub fn mul(x: &CReal, y: &CReal) -> CReal {
    if let Some((a, b)) = exact_pair(x, y) {
        return CReal::from_rational(a * b);
    }
    let (x, y) = (x.clone(), y.clone());
    CReal::from_fn(move |n| {
        let bound = magnitude_bound(&x)? + magnitude_bound(&y)? + int(2);
        let shift = (ceil_log2(&bound) + 2).max(0) as u32;
        Ok(x.approx(n + shift)? * y.approx(n + shift)?)
    })
}

/// Multiplication by an exact rational.
pub fn scale(x: &CReal, c: &Rational) -> CReal {
    mul(x, &CReal::from_rational(c.clone()))
}

/// Clamps into `[lo, hi]`; clamping is 1-Lipschitz so the sequence stays fast Cauchy.
pub fn clamp(x: &CReal, lo: &Rational, hi: &Rational) -> CReal {
    let (x, lo, hi) = (x.clone(), lo.clone(), hi.clone());
    CReal::from_fn(move |n| {
        let q = x.approx(n)?;
        Ok(if q < lo {
            lo.clone()
        } else if q > hi {
            hi.clone()
        } else {
            q
        })
    })
}

pub fn abs(x: &CReal) -> CReal {
    if let Some(q) = x.exact() {
        return CReal::from_rational(q.abs());
    }
    let x = x.clone();
    CReal::from_fn(move |n| Ok(x.approx(n)?.abs()))
}

/// Fuel-bounded semi-decision of `x < y` versus `x > y`.
pub fn lt_semi(x: &CReal, y: &CReal, fuel: u32) -> Result<Comparison> {
    for round in 0..fuel {
        let p = refinement_precision(round);
        let (ex, ey) = (x.enclosure(p)?, y.enclosure(p)?);
        if ex.hi() < ey.lo() {
            return Ok(Comparison::Less);
        }
        if ey.hi() < ex.lo() {
            return Ok(Comparison::Greater);
        }
    }
    Ok(Comparison::Undecided)
}

/// Builds a real by evaluating an interval extension `g` on ever tighter
/// enclosures of `x` until the image is narrower than `2^(-n-2)`.
///
/// `g` returns `Ok(None)` while the enclosure still straddles a domain
/// boundary and `Err(Domain)` once the input is certified outside the domain.
fn lift_interval<G>(x: &CReal, fuel: u32, g: G) -> CReal
where
    G: Fn(&Interval, u32) -> Result<Option<Interval>> + Send + Sync + 'static,
{
    let x = x.clone();
    CReal::from_fn(move |n| {
        let target = pow2(-(n as i64) - 2);
        let step = n / 2 + 8;
        for round in 0..fuel {
            let w = n + 4 + round * step;
            let input = match x.exact() {
                Some(q) => Interval::point(q.clone()),
                None => x.enclosure(w)?,
            };
            if let Some(image) = g(&input, w + 8)? {
                if image.width() <= target {
                    return Ok(round_down(&image.midpoint(), n + 4));
                }
            }
        }
        Err(Error::diverged(DivergeReason::Other(
            "interval refinement fuel exhausted".into(),
        )))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TranscendentalOp {
    Sqrt,
    Log,
    Exp,
}

pub fn transcendental(op: TranscendentalOp, x: &CReal) -> CReal {
    transcendental_with(op, x, DEFAULT_FUEL)
}

pub fn transcendental_with(op: TranscendentalOp, x: &CReal, fuel: u32) -> CReal {
    match op {
        TranscendentalOp::Sqrt => sqrt_with(x, fuel),
        TranscendentalOp::Log => log_with(x, fuel),
        TranscendentalOp::Exp => exp_with(x, fuel),
    }
}

pub fn sqrt(x: &CReal) -> CReal {
    sqrt_with(x, DEFAULT_FUEL)
}

pub fn log(x: &CReal) -> CReal {
    log_with(x, DEFAULT_FUEL)
}

pub fn exp(x: &CReal) -> CReal {
    exp_with(x, DEFAULT_FUEL)
}

pub fn sqrt_with(x: &CReal, fuel: u32) -> CReal {
    lift_interval(x, fuel, |iv, bits| {
        if iv.hi().is_negative() {
            return Err(Error::Domain("sqrt of a negative real".into()));
        }
        let lo = if iv.lo().is_negative() {
            Rational::zero()
        } else {
            iv.lo().clone()
        };
        Ok(Some(Interval::new(
            sqrt_lower(&lo, bits),
            sqrt_upper(iv.hi(), bits),
        )?))
    })
}

pub fn log_with(x: &CReal, fuel: u32) -> CReal {
    lift_interval(x, fuel, |iv, bits| {
        if !iv.hi().is_positive() {
            return Err(Error::Domain("log of a non-positive real".into()));
        }
        if !iv.lo().is_positive() {
            return Ok(None);
        }
        let (lo, _) = log_bounds(iv.lo(), bits);
        let (_, hi) = log_bounds(iv.hi(), bits);
        Ok(Some(Interval::new(lo, hi)?))
    })
}

pub fn exp_with(x: &CReal, fuel: u32) -> CReal {
    lift_interval(x, fuel, |iv, bits| {
        let (lo, _) = exp_bounds(iv.lo(), bits);
        let (_, hi) = exp_bounds(iv.hi(), bits);
        Ok(Some(Interval::new(lo, hi)?))
    })
}

pub fn reciprocal(x: &CReal) -> CReal {
    reciprocal_with(x, DEFAULT_FUEL)
}

/// `1/x`, once `x` has been separated from zero.
pub fn reciprocal_with(x: &CReal, fuel: u32) -> CReal {
    if let Some(a) = x.exact() {
        if !a.is_zero() {
            return CReal::from_rational(a.recip());
        }
    }
    let x = x.clone();
    CReal::from_fn(move |n| {
        // Find 2^-e <= |x|.
        let mut found = None;
        for round in 0..fuel {
            let p = refinement_precision(round);
            let q = x.approx(p)?;
            let lower = q.abs() - pow2(1 - p as i64);
            if lower.is_positive() {
                found = Some(ceil_log2(&lower.recip()).max(0) as u32);
                break;
            }
        }
        let Some(e) = found else {
            return Err(Error::diverged(DivergeReason::Comparison));
        };
        // |1/x_j - 1/x| <= 2^(-n-2) once j >= n + 2e + 4; rounding adds 2^(-n-3).
        Ok(round_down(&x.approx(n + 2 * e + 4)?.recip(), n + 3))
    })
}

pub fn div(x: &CReal, y: &CReal) -> CReal {
    mul(x, &reciprocal(y))
}

fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    let scaled = (q * pow2(2 * bits as i64)).floor().to_integer();
    let root: BigUint = scaled.magnitude().sqrt();
    Rational::new(BigInt::from(root), BigInt::one() << bits as usize)
}

fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    let scaled = (q * pow2(2 * bits as i64)).ceil().to_integer();
    let mag = scaled.magnitude().clone();
    let mut root: BigUint = mag.sqrt();
    if &root * &root != mag {
        root += 1u32;
    }
    Rational::new(BigInt::from(root), BigInt::one() << bits as usize)
}

/// `ceil(m / 2^k)`.
fn ceil_shr(m: BigInt, k: u32) -> BigInt {
    -((-m) >> k as usize)
}

fn ceil_div(m: &BigInt, d: u64) -> BigInt {
    -((-m).div_floor(&BigInt::from(d)))
}

/// Rational bounds `(lo, hi)` on `exp(q)` with `hi - lo` of order `2^-bits`.
///
/// Works in fixed point: `q = t 2^r` with `0 <= t <= 1/2`, a Taylor sum with
/// directed rounding for `exp(t)`, then `r` squarings. Negative arguments go
/// through `exp(q) = 1/exp(-q)`.
pub fn exp_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    if q.is_negative() {
        // e^q < 2^q <= 2^-(bits+2) already, so skip the series.
        if *q <= Rational::from_integer(-BigInt::from(bits as u64 + 2)) {
            return (Rational::zero(), pow2(-(bits as i64) - 2));
        }
        let (lo, hi) = exp_bounds(&-q, bits + 2);
        let g = bits + 8;
        return (round_down(&hi.recip(), g), round_up(&lo.recip(), g));
    }
    let reductions = if q.is_zero() {
        0
    } else {
        (ceil_log2(q) + 1).max(0) as u32
    };
    // log2(e^q) < 1.45 q extra integer bits are needed to keep the absolute error small.
    let magnitude = scaled_ceil(q, 0) * BigInt::from(3) / BigInt::from(2);
    let extra = magnitude.to_u32().unwrap_or(u32::MAX / 4).min(u32::MAX / 4);
    let f = bits + 2 * reductions + extra + 16;
    let one = BigInt::one() << f as usize;
    let shift = f - reductions;
    let (t_lo, t_hi) = (scaled_floor(q, shift), scaled_ceil(q, shift));

    let mut lo = one.clone();
    let mut term = one.clone();
    let mut k = 1u64;
    loop {
        term = (&term * &t_lo) / (&one * BigInt::from(k));
        if term.is_zero() {
            break;
        }
        lo += &term;
        k += 1;
    }
    let mut hi = one.clone();
    let mut term = one.clone();
    let mut k = 1u64;
    loop {
        term = ceil_shr(ceil_div(&(&term * &t_hi), k), f);
        hi += &term;
        k += 1;
        if term <= BigInt::one() {
            // t <= 1/2 makes the remaining terms sum to at most the last one.
            hi += BigInt::from(2);
            break;
        }
    }
    for _ in 0..reductions {
        lo = (&lo * &lo) >> f as usize;
        hi = ceil_shr(&hi * &hi, f);
    }
    (dyadic(lo, f), dyadic(hi, f))
}

/// Fixed-point bounds on `atanh(z) 2^f` for `0 <= z <= 1/3`.
fn atanh_fixed(z: &Rational, f: u32) -> (BigInt, BigInt) {
    let (z_lo, z_hi) = (scaled_floor(z, f), scaled_ceil(z, f));
    let z2_lo = (&z_lo * &z_lo) >> f as usize;
    let z2_hi = ceil_shr(&z_hi * &z_hi, f);

    let mut lo = BigInt::zero();
    let mut p = z_lo;
    let mut k = 0u64;
    while p.is_positive() {
        lo += &p / BigInt::from(2 * k + 1);
        p = (&p * &z2_lo) >> f as usize;
        k += 1;
    }
    let mut hi = BigInt::zero();
    let mut p = z_hi;
    let mut k = 0u64;
    loop {
        hi += ceil_div(&p, 2 * k + 1);
        p = ceil_shr(&p * &z2_hi, f);
        k += 1;
        if p <= BigInt::one() {
            // Tail <= p / (1 - z^2) <= 9/8 p.
            hi += BigInt::from(2);
            break;
        }
    }
    (lo, hi)
}

static LN2_CACHE: Mutex<Option<(u32, BigInt, BigInt)>> = Mutex::new(None);

/// Fixed-point bounds on `ln 2 * 2^f`, as `2 atanh(1/3)`.
fn ln2_fixed(f: u32) -> (BigInt, BigInt) {
    let mut cache = LN2_CACHE.lock().expect("ln2 cache poisoned");
    let stale = cache.as_ref().is_none_or(|(bits, _, _)| *bits < f);
    if stale {
        let g = f.max(256) + 8;
        let (lo, hi) = atanh_fixed(&Rational::new(1.into(), 3.into()), g);
        *cache = Some((g, lo * 2, hi * 2));
    }
    let (g, lo, hi) = cache.as_ref().expect("filled above");
    let drop = g - f;
    (lo >> drop as usize, ceil_shr(hi.clone(), drop))
}

/// Rational bounds `(lo, hi)` on `ln(q)` for `q > 0`.
pub fn log_bounds(q: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(q.is_positive());
    let mut e = ceil_log2(q);
    if pow2(e) != *q {
        e -= 1;
    }
    // q = m 2^e with 1 <= m < 2; ln m = 2 atanh((m-1)/(m+1)).
    let m = q / pow2(e);
    let z = (&m - int(1)) / (&m + int(1));
    let f = bits + 8 + (64 - e.unsigned_abs().leading_zeros());
    let (a_lo, a_hi) = atanh_fixed(&z, f);
    let (l_lo, l_hi) = ln2_fixed(f);
    let e_big = BigInt::from(e);
    let (el_lo, el_hi) = if e >= 0 {
        (&e_big * &l_lo, &e_big * &l_hi)
    } else {
        (&e_big * &l_hi, &e_big * &l_lo)
    };
    (dyadic(el_lo + a_lo * 2, f), dyadic(el_hi + a_hi * 2, f))
}

/// Fixed-point bounds on `atan(1/k) 2^f` from the alternating series.
fn atan_inv_fixed(k: u64, f: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << f as usize;
    let k2 = BigInt::from(k * k);
    let mut power = BigInt::from(k);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut j = 0u64;
    loop {
        let t = &one / (&power * BigInt::from(2 * j + 1));
        if t.is_zero() {
            // The remainder is below the first omitted term, itself below one unit.
            return (lo - 1, hi + 1);
        }
        if j.is_multiple_of(2) {
            hi += &t + 1;
            lo += t;
        } else {
            lo -= &t + 1;
            hi -= t;
        }
        power *= &k2;
        j += 1;
    }
}

/// Bounds on pi via Machin's formula `16 atan(1/5) - 4 atan(1/239)`.
pub fn pi_bounds(bits: u32) -> (Rational, Rational) {
    let f = bits + 8;
    let (a_lo, a_hi) = atan_inv_fixed(5, f);
    let (b_lo, b_hi) = atan_inv_fixed(239, f);
    (
        dyadic(a_lo * 16 - b_hi * 4, f),
        dyadic(a_hi * 16 - b_lo * 4, f),
    )
}

pub fn pi() -> CReal {
    CReal::from_fn(|n| {
        let (lo, hi) = pi_bounds(n + 4);
        Ok(round_down(&((lo + hi) / int(2)), n + 4))
    })
}

/// `e` as `2 + sum_{k=2}^{2+n} 1/k!`.
pub fn euler() -> CReal {
    CReal::from_fn(|n| {
        let mut sum = int(2);
        let mut fact = BigInt::one();
        for k in 2..=(2 + n as i64) {
            fact *= BigInt::from(k);
            sum += Rational::new(BigInt::one(), fact.clone());
        }
        Ok(sum)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::rat;

    #[test]
    fn exp_bounds_bracket_known_values() {
        let (lo, hi) = exp_bounds(&int(0), 30);
        assert!(lo <= int(1) && int(1) <= hi);
        // e^1 in [2.718281828, 2.718281829]
        let (lo, hi) = exp_bounds(&int(1), 40);
        assert!(lo >= rat(2718281828, 1_000_000_000) && hi <= rat(2718281829, 1_000_000_000));
        let (lo, hi) = exp_bounds(&int(-3), 40);
        // e^-3 = 0.049787068367863944
        assert!(
            lo <= rat(49787068368, 1_000_000_000_000) && hi >= rat(49787068367, 1_000_000_000_000)
        );
        assert!(&hi - &lo < pow2(-30));
    }

    #[test]
    fn exp_of_huge_negative_is_cheap() {
        let x = CReal::from_int(-10_000_000);
        let start = std::time::Instant::now();
        assert!(exp(&x).approx(20).unwrap().abs() <= pow2(-19));
        let (lo, hi) = exp_bounds(&int(-42), 40);
        assert!(lo.is_zero() && hi <= pow2(-42));
        assert!(start.elapsed().as_secs() < 2);
    }

    #[test]
    fn log_bounds_bracket_known_values() {
        let (lo, hi) = log_bounds(&int(1), 30);
        assert!(lo <= Rational::zero() && Rational::zero() <= hi);
        // ln 10 = 2.302585092994046
        let (lo, hi) = log_bounds(&int(10), 40);
        assert!(lo <= rat(2302585093, 1_000_000_000) && hi >= rat(2302585092, 1_000_000_000));
        let (lo, hi) = log_bounds(&rat(1, 8), 40);
        // ln(1/8) = -2.0794415416798357
        assert!(lo <= rat(-2079441541, 1_000_000_000) && hi >= rat(-2079441542, 1_000_000_000));
        assert!(&hi - &lo < pow2(-30));
    }

    #[test]
    fn pi_bounds_are_tight() {
        let (lo, hi) = pi_bounds(50);
        assert!(lo <= rat(314159265358979, 100_000_000_000_000) + pow2(-40));
        assert!(hi >= rat(314159265358979, 100_000_000_000_000));
        assert!(&hi - &lo <= pow2(-48));
    }

    #[test]
    fn sqrt_rational_bounds() {
        assert_eq!(sqrt_lower(&int(4), 10), int(2));
        assert_eq!(sqrt_upper(&int(4), 10), int(2));
        let (lo, hi) = (sqrt_lower(&int(2), 20), sqrt_upper(&int(2), 20));
        assert!(&lo * &lo <= int(2) && int(2) <= &hi * &hi);
    }

    #[test]
    fn refinement_schedule_starts_fine() {
        assert_eq!(refinement_precision(0), 4);
        assert_eq!(refinement_precision(9), 40);
    }
}
