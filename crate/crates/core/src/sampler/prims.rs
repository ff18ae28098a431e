//! Primitive distributions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monad::{bind, ret, Sampler};
use super::tape::BitTape;
use crate::error::{DivergeReason, Error, Result};
use crate::exactreal::ops::{self, Comparison, DEFAULT_FUEL};
use crate::exactreal::rational::{ceil_log2, dyadic, int, rat};
use crate::exactreal::{CReal, Rational};
use crate::lazy::{LazyBool, LazyNat, Thunk};

/// Bounds on the two kinds of unbounded search a sampler may perform.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    /// Depth of recursive sampler unfolding (geometric, rejection loops).
    pub recursion: u32,
    /// Refinement rounds for a real comparison.
    pub comparison: u32,
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            recursion: DEFAULT_FUEL,
            comparison: DEFAULT_FUEL,
        }
    }
}

impl Fuel {
    pub fn uniform(n: u32) -> Self {
        Fuel {
            recursion: n,
            comparison: n,
        }
    }
}

/// `n` bisections of `(0, 1)` steered by the tape; bit `true` keeps the left half.
/// After `m` steps the interval is `[k/2^m, (k+1)/2^m]`; the midpoint is returned.
fn bisect(tape: &BitTape, n: u32) -> Result<Rational> {
    let mut k = BigInt::zero();
    for m in 0..n {
        k <<= 1usize;
        if !tape.read(m as u64)? {
            k += 1u32;
        }
    }
    Ok(dyadic(2 * k + 1, n + 1))
}

pub fn std_uniform() -> Sampler<CReal> {
    Sampler::new(|t| {
        let t = t.clone();
        Ok(CReal::from_fn(move |n| bisect(&t, n + 1)))
    })
}

pub fn uniform(a: &CReal, b: &CReal) -> Sampler<CReal> {
    uniform_with(a, b, Fuel::default())
}

/// `a + (b - a) * u` for `u ~ std_uniform`.
pub fn uniform_with(a: &CReal, b: &CReal, fuel: Fuel) -> Sampler<CReal> {
    let (a, b) = (a.clone(), b.clone());
    let u = std_uniform();
    Sampler::new(move |t| {
        match ops::lt_semi(&a, &b, fuel.comparison)? {
            Comparison::Less => {}
            Comparison::Greater => {
                return Err(Error::InvalidArgument(
                    "uniform: lower endpoint exceeds upper".into(),
                ))
            }
            Comparison::Undecided => return Err(Error::diverged(DivergeReason::Comparison)),
        }
        let draw = u.run(t)?;
        if let (Some(qa), Some(qb)) = (a.exact(), b.exact()) {
            let (qa, width) = (qa.clone(), qb - qa);
            // u_m moves by 2^-(m+3) per step, so width * u needs ceil_log2(width) - 3 extra bits.
            let shift = (ceil_log2(&width) - 3).max(0) as u32;
            return Ok(CReal::from_fn(move |n| {
                Ok(&qa + &width * draw.approx(n + shift)?)
            }));
        }
        Ok(ops::add(&a, &ops::mul(&ops::sub(&b, &a), &draw)))
    })
}

pub fn std_bernoulli() -> Sampler<LazyBool> {
    Sampler::new(|t| {
        let t = t.clone();
        Ok(Thunk::new(move || t.read(0)))
    })
}

pub fn bernoulli(p: &CReal) -> Sampler<LazyBool> {
    bernoulli_with(p, Fuel::default())
}

/// `u < p` for `u ~ std_uniform`, decided by refinement.
pub fn bernoulli_with(p: &CReal, fuel: Fuel) -> Sampler<LazyBool> {
    let p = p.clone();
    let u = std_uniform();
    Sampler::new(move |t| {
        let draw = u.run(t)?;
        let p = p.clone();
        Ok(Thunk::new(move || {
            match ops::lt_semi(&draw, &p, fuel.comparison)? {
                Comparison::Less => Ok(true),
                Comparison::Greater => Ok(false),
                Comparison::Undecided => Err(Error::diverged(DivergeReason::Comparison)),
            }
        }))
    })
}

pub fn std_geometric() -> Sampler<LazyNat> {
    std_geometric_with(Fuel::default())
}

pub fn std_geometric_with(fuel: Fuel) -> Sampler<LazyNat> {
    geometric_unfold(fuel.recursion)
}

fn exhausted<X: Clone + Send + Sync + 'static>() -> Sampler<X> {
    Sampler::new(|_| Err(Error::diverged(DivergeReason::Recursion)))
}

fn geometric_unfold(depth: u32) -> Sampler<LazyNat> {
    if depth == 0 {
        return exhausted();
    }
    bind(&std_bernoulli(), move |b: LazyBool| {
        if b.force()? {
            Ok(ret(LazyNat::new(1)))
        } else {
            Ok(bind(&geometric_unfold(depth - 1), |n: LazyNat| {
                Ok(ret(n.succ()))
            }))
        }
    })
}

pub fn std_normal() -> Sampler<CReal> {
    std_normal_with(Fuel::default())
}

/// Marsaglia polar method, accepting `u1 * sqrt(-2 log s / s)` when `s < 1`.
pub fn std_normal_with(fuel: Fuel) -> Sampler<CReal> {
    marsaglia_round(fuel.recursion, fuel)
}

fn marsaglia_round(depth: u32, fuel: Fuel) -> Sampler<CReal> {
    if depth == 0 {
        return exhausted();
    }
    let (lo, hi) = (CReal::from_int(-1), CReal::from_int(1));
    let coord = uniform_with(&lo, &hi, fuel);
    let inner = coord.clone();
    bind(&coord, move |u1: CReal| {
        Ok(bind(&inner, move |u2: CReal| {
            let s = ops::add(&ops::mul(&u1, &u1), &ops::mul(&u2, &u2));
            match ops::lt_semi(&s, &CReal::from_int(1), fuel.comparison)? {
                Comparison::Less => {
                    let ratio = ops::div(&ops::log_with(&s, fuel.comparison), &s);
                    let radicand = ops::scale(&ratio, &int(-2));
                    Ok(ret(ops::mul(
                        &u1,
                        &ops::sqrt_with(&radicand, fuel.comparison),
                    )))
                }
                Comparison::Greater => Ok(marsaglia_round(depth - 1, fuel)),
                Comparison::Undecided => Err(Error::diverged(DivergeReason::Comparison)),
            }
        }))
    })
}

pub fn normal(m: &CReal, s: &CReal) -> Sampler<CReal> {
    normal_with(m, s, Fuel::default())
}

/// `m + s * z` for `z ~ std_normal`.
pub fn normal_with(m: &CReal, s: &CReal, fuel: Fuel) -> Sampler<CReal> {
    let (m, s) = (m.clone(), s.clone());
    let z = std_normal_with(fuel);
    Sampler::new(move |t| {
        match ops::lt_semi(&CReal::from_int(0), &s, fuel.comparison)? {
            Comparison::Less => {}
            Comparison::Greater => {
                return Err(Error::InvalidArgument("normal: negative scale".into()))
            }
            Comparison::Undecided => return Err(Error::diverged(DivergeReason::Comparison)),
        }
        let draw = z.run(t)?;
        if s.exact().is_some_and(|q| q.is_one()) {
            return Ok(ops::add(&m, &draw));
        }
        Ok(ops::add(&m, &ops::mul(&s, &draw)))
    })
}

/// The Cantor distribution, trisecting on each bit exactly as `go` does:
/// at step `n` the interval shrinks to width `3^-n`, so bit 0 never moves it.
pub fn cantor() -> Sampler<CReal> {
    Sampler::new(|t| {
        let t = t.clone();
        Ok(CReal::from_fn(move |m| {
            let (mut left, mut right) = (Rational::zero(), Rational::one());
            let mut pow = Rational::one();
            for n in 0..m {
                if t.read(n as u64)? {
                    right = &left + &pow;
                } else {
                    left = &right - &pow;
                }
                pow /= int(3);
            }
            Ok(&right - rat(1, 2) * pow)
        }))
    })
}

/// A sampler that is itself divergent.
pub fn bot_samp() -> Sampler<CReal> {
    Sampler::bottom()
}

/// A sampler whose every sample diverges at every precision.
pub fn bot_samp_bot() -> Sampler<CReal> {
    Sampler::new(|_| Ok(CReal::bottom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn uniform_hand_traces() {
        let u = std_uniform();
        let x = u.run(&BitTape::constant(true)).unwrap();
        assert_eq!(x.approx(0).unwrap(), rat(1, 4));
        let y = u.run(&BitTape::constant(false)).unwrap();
        assert_eq!(y.approx(0).unwrap(), rat(3, 4));
        assert_eq!(y.approx(1).unwrap(), rat(7, 8));
        let v = uniform(&CReal::from_int(-1), &CReal::from_int(1))
            .run(&BitTape::constant(false))
            .unwrap();
        assert_eq!(v.approx(0).unwrap(), rat(1, 2));
    }

    #[test]
    fn uniform_reads_n_plus_one_bits() {
        for n in 0..20 {
            let t = BitTape::prng(n as u64);
            let x = std_uniform().run(&t).unwrap();
            let q = x.approx(n).unwrap();
            assert_eq!(t.bits_read(), n as usize + 1);
            assert_eq!(q.denom().to_u64().unwrap(), 1 << (n + 2));
        }
    }

    #[test]
    fn short_prefix_runs_out() {
        let x = std_uniform()
            .run(&BitTape::from_bit_str("10").unwrap())
            .unwrap();
        assert!(x.approx(1).is_ok());
        assert!(matches!(x.approx(2), Err(Error::OutOfBits { .. })));
    }

    #[test]
    fn geometric_first_even_bit_true_gives_one() {
        let g = std_geometric();
        assert_eq!(
            g.run(&BitTape::from_bit_str("1").unwrap())
                .unwrap()
                .force()
                .unwrap(),
            1
        );
        let r = g.run(&BitTape::constant(false)).unwrap().force();
        assert!(matches!(r, Err(Error::Diverged(DivergeReason::Recursion))));
    }

    #[test]
    fn bernoulli_one_is_true() {
        for seed in 0..20 {
            let b = bernoulli(&CReal::from_int(1))
                .run(&BitTape::prng(seed))
                .unwrap();
            assert!(b.force().unwrap());
        }
    }

    #[test]
    fn cantor_starts_at_half() {
        let c = cantor().run(&BitTape::prng(5)).unwrap();
        assert_eq!(c.approx(0).unwrap(), rat(1, 2));
    }

    #[test]
    fn bottoms() {
        let t = BitTape::prng(0);
        assert!(bot_samp().run(&t).is_err());
        assert_eq!(t.bits_read(), 0);
        let x = bot_samp_bot().run(&t).unwrap();
        assert!(x.approx(0).is_err());
        let s = bind(&bot_samp_bot(), |_x: CReal| Ok(ret(LazyNat::new(7))));
        assert_eq!(s.run(&t).unwrap().force().unwrap(), 7);
    }
}
