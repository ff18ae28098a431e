//! Computable reals as memoized fast Cauchy sequences.
//!
//! A [`CReal`] is queried by precision index `n`; the answer `q_n` satisfies
//! `|q_n - q_(n+1)| <= 2^-n`, hence `|x - q_n| <= 2^(-n+1)` for the limit `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Signed;

use super::interval::Interval;
use super::rational::{format_rational, pow2, Rational};
use crate::error::{DivergeReason, Error, Result};
use crate::lazy::Thunk;

type ApproxFn = dyn Fn(u32) -> Result<Rational> + Send + Sync;

#[derive(Clone)]
pub struct CReal(Arc<Inner>);

struct Inner {
    f: Box<ApproxFn>,
    memo: Mutex<HashMap<u32, Result<Rational>>>,
    debug_check: bool,
    exact: Option<Rational>,
}

impl fmt::Debug for CReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.exact {
            Some(q) => write!(f, "CReal({})", format_rational(q)),
            None => write!(f, "CReal(<sequence>)"),
        }
    }
}

impl CReal {
    /// Wraps a precision-indexed sequence. The caller asserts it is fast
    /// Cauchy; with `debug_check` every query also verifies the next step.
    pub fn new<F>(f: F, debug_check: bool) -> Self
    where
        F: Fn(u32) -> Result<Rational> + Send + Sync + 'static,
    {
        CReal(Arc::new(Inner {
            f: Box::new(f),
            memo: Mutex::new(HashMap::new()),
            debug_check,
            exact: None,
        }))
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u32) -> Result<Rational> + Send + Sync + 'static,
    {
        Self::new(f, false)
    }

    pub fn from_rational(q: Rational) -> Self {
        let value = q.clone();
        CReal(Arc::new(Inner {
            f: Box::new(move |_| Ok(value.clone())),
            memo: Mutex::new(HashMap::new()),
            debug_check: false,
            exact: Some(q),
        }))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(super::rational::int(n))
    }

    /// A real none of whose approximations can be produced.
    pub fn bottom() -> Self {
        Self::from_fn(|_| Err(Error::diverged(DivergeReason::BottomValue)))
    }

    /// A real whose sequence comes from a value computed on first demand.
    pub fn deferred(thunk: Thunk<CReal>) -> Self {
        Self::from_fn(move |n| thunk.force()?.approx(n))
    }

    /// Same sequence, with the fast Cauchy check switched on.
    pub fn checked(&self) -> Self {
        let inner = self.clone();
        Self::new(move |n| inner.approx(n), true)
    }

    /// The exact value when this real was built from a rational.
    pub fn exact(&self) -> Option<&Rational> {
        self.0.exact.as_ref()
    }

    fn value(&self, n: u32) -> Result<Rational> {
        if let Some(hit) = self.0.memo.lock().expect("memo poisoned").get(&n) {
            return hit.clone();
        }
        let computed = (self.0.f)(n);
        let mut memo = self.0.memo.lock().expect("memo poisoned");
        // First writer wins so repeated queries stay bit-identical.
        memo.entry(n).or_insert(computed).clone()
    }

    /// The `n`-th approximation.
    pub fn approx(&self, n: u32) -> Result<Rational> {
        let q = self.value(n)?;
        if self.0.debug_check {
            let next = self.value(n + 1)?;
            let gap = (&q - &next).abs();
            if gap > pow2(-(n as i64)) {
                return Err(Error::FastCauchyViolation {
                    n,
                    gap: format_rational(&gap),
                });
            }
        }
        Ok(q)
    }

    /// `[q_n - 2^(-n+1), q_n + 2^(-n+1)]`, which always holds the limit.
    pub fn enclosure(&self, n: u32) -> Result<Interval> {
        let q = self.approx(n)?;
        Ok(Interval::around(&q, &enclosure_radius(n)))
    }

    /// Checks `|q_k - q_(k+1)| <= 2^-k` for every `k <= max_n`.
    pub fn verify_fast_cauchy(&self, max_n: u32) -> Result<()> {
        let mut prev = self.value(0)?;
        for k in 0..=max_n {
            let next = self.value(k + 1)?;
            let gap = (&prev - &next).abs();
            if gap > pow2(-(k as i64)) {
                return Err(Error::FastCauchyViolation {
                    n: k,
                    gap: format_rational(&gap),
                });
            }
            prev = next;
        }
        Ok(())
    }
}

/// `2^(-n+1)`, the radius attached to the `n`-th approximation.
pub fn enclosure_radius(n: u32) -> Rational {
    pow2(1 - n as i64)
}

impl From<Rational> for CReal {
    fn from(q: Rational) -> Self {
        CReal::from_rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::{int, rat};
    use num_traits::Zero;

    fn thrashing_zero() -> CReal {
        // y_n = 1 / (-2)^(n+1)
        CReal::new(
            |n| {
                Ok(Rational::new(
                    (-1i64).pow((n + 1) % 2).into(),
                    num_bigint::BigInt::from(2) << n as usize,
                ))
            },
            true,
        )
    }

    #[test]
    fn constant_zero() {
        let z = CReal::new(|_| Ok(Rational::zero()), true);
        for n in 0..10 {
            assert!(z.approx(n).unwrap().is_zero());
        }
    }

    #[test]
    fn thrashing_sequence_values() {
        let y = thrashing_zero();
        assert_eq!(y.approx(0).unwrap(), rat(-1, 2));
        assert_eq!(y.approx(1).unwrap(), rat(1, 4));
        for n in 0..=20 {
            assert!(y.enclosure(n).unwrap().contains(&Rational::zero()));
        }
    }

    #[test]
    fn rational_embeds_constantly() {
        assert_eq!(
            CReal::from_rational(rat(3, 4)).approx(17).unwrap(),
            rat(3, 4)
        );
    }

    #[test]
    fn enclosure_of_zero_and_width_halving() {
        let z = CReal::from_rational(int(0));
        let e = z.enclosure(3).unwrap();
        assert_eq!((e.lo().clone(), e.hi().clone()), (rat(-1, 4), rat(1, 4)));
        for n in 0..20 {
            assert_eq!(
                z.enclosure(n + 1).unwrap().width() * int(2),
                z.enclosure(n).unwrap().width()
            );
        }
    }

    #[test]
    fn debug_check_catches_bad_sequence() {
        let bad = CReal::new(|n| Ok(if n % 2 == 0 { int(0) } else { int(5) }), true);
        assert!(matches!(
            bad.approx(0),
            Err(Error::FastCauchyViolation { n: 0, .. })
        ));
        assert!(bad.verify_fast_cauchy(3).is_err());
    }

    #[test]
    fn bottom_diverges() {
        assert!(matches!(CReal::bottom().approx(0), Err(Error::Diverged(_))));
    }

    #[test]
    fn memo_is_stable_across_threads() {
        let x = CReal::from_fn(|n| Ok(rat(1, 3) + pow2(-(n as i64) - 2)));
        let expected = x.approx(12).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let x = x.clone();
                std::thread::spawn(move || x.approx(12).unwrap())
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), expected);
        }
    }
}
