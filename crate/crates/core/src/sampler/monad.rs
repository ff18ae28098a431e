//! The sampling monad.
//!
//! `run(bind(s, f), t) = run(f(x), odd(t))` where `x` is `run(s, even(t))`
//! passed unevaluated. A sampler may itself be bottom: binding on such a
//! sampler yields bottom without looking at the continuation, while a sampler
//! that merely produces a bottom value is an ordinary, non-bottom sampler.

use std::fmt;
use std::sync::Arc;

use super::tape::BitTape;
use crate::error::{DivergeReason, Error, Result};
use crate::lazy::{Deferred, Thunk};

type RunFn<X> = dyn Fn(&BitTape) -> Result<X> + Send + Sync;

pub struct Sampler<X> {
    run: Arc<RunFn<X>>,
    bottom: Option<Error>,
}

impl<X> Clone for Sampler<X> {
    fn clone(&self) -> Self {
        Sampler {
            run: Arc::clone(&self.run),
            bottom: self.bottom.clone(),
        }
    }
}

impl<X> fmt::Debug for Sampler<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.bottom {
            Some(e) => write!(f, "Sampler(bottom: {e})"),
            None => f.write_str("Sampler(..)"),
        }
    }
}

impl<X: Clone + Send + Sync + 'static> Sampler<X> {
    pub fn new<F>(run: F) -> Self
    where
        F: Fn(&BitTape) -> Result<X> + Send + Sync + 'static,
    {
        Sampler {
            run: Arc::new(run),
            bottom: None,
        }
    }

    /// A sampler that is itself undefined.
    pub fn bottom_with(err: Error) -> Self {
        let e = err.clone();
        Sampler {
            run: Arc::new(move |_| Err(e.clone())),
            bottom: Some(err),
        }
    }

    pub fn bottom() -> Self {
        Self::bottom_with(Error::diverged(DivergeReason::BottomSampler))
    }

    pub fn is_bottom(&self) -> bool {
        self.bottom.is_some()
    }

    pub fn run(&self, tape: &BitTape) -> Result<X> {
        if let Some(e) = &self.bottom {
            return Err(e.clone());
        }
        (self.run)(tape)
    }

    /// Post-composes `g` on the same tape. `g` should not force its argument.
    pub fn map<Y, G>(&self, g: G) -> Sampler<Y>
    where
        Y: Clone + Send + Sync + 'static,
        G: Fn(X) -> Y + Send + Sync + 'static,
    {
        if let Some(e) = &self.bottom {
            return Sampler::bottom_with(e.clone());
        }
        let me = self.clone();
        Sampler::new(move |t| Ok(g(me.run(t)?)))
    }
}

pub fn ret<X: Clone + Send + Sync + 'static>(x: X) -> Sampler<X> {
    Sampler::new(move |_| Ok(x.clone()))
}

pub fn bind<X, Y, F>(s: &Sampler<X>, f: F) -> Sampler<Y>
where
    X: Deferred,
    Y: Clone + Send + Sync + 'static,
    F: Fn(X) -> Result<Sampler<Y>> + Send + Sync + 'static,
{
    if let Some(e) = &s.bottom {
        return Sampler::bottom_with(e.clone());
    }
    let s = s.clone();
    Sampler::new(move |t| {
        let (even, odd) = t.split();
        let first = s.clone();
        let x = X::defer(Thunk::new(move || first.run(&even)));
        f(x)?.run(&odd)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazy::{LazyBool, LazyNat};
    use num_bigint::BigUint;

    fn coin() -> Sampler<LazyBool> {
        Sampler::new(|t| {
            let t = t.clone();
            Ok(Thunk::new(move || t.read(0)))
        })
    }

    #[test]
    fn bind_reads_even_then_odd() {
        let s = bind(&coin(), |b: LazyBool| {
            Ok(coin().map(move |c: LazyBool| {
                let b = b.clone();
                c.map(move |c| Ok((b.force()?, c)))
            }))
        });
        let t = BitTape::from_bit_str("01").unwrap();
        let pair = s.run(&t).unwrap().force().unwrap();
        assert_eq!(pair, (false, true));
        let reads: Vec<_> = t.reads().into_iter().collect();
        assert_eq!(reads, vec![BigUint::from(0u8), BigUint::from(1u8)]);
    }

    #[test]
    fn unused_first_sample_reads_nothing() {
        let s = bind(&coin(), |_b: LazyBool| Ok(ret(LazyNat::new(7))));
        let t = BitTape::prng(1);
        assert_eq!(s.run(&t).unwrap().force().unwrap(), 7);
        assert_eq!(t.bits_read(), 0);
    }

    #[test]
    fn bottom_sampler_poisons_bind_but_bottom_value_does_not() {
        let bot: Sampler<LazyNat> = Sampler::bottom();
        let s = bind(&bot, |_n: LazyNat| Ok(ret(LazyNat::new(0))));
        assert!(s.is_bottom());
        assert!(s.run(&BitTape::prng(0)).is_err());

        let bot_val: Sampler<LazyNat> = ret(LazyNat::bottom());
        let s = bind(&bot_val, |_n: LazyNat| Ok(ret(LazyNat::new(0))));
        assert!(!s.is_bottom());
        assert_eq!(s.run(&BitTape::prng(0)).unwrap().force().unwrap(), 0);
    }
}
