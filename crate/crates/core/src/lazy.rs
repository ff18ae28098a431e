//! Memoized thunks and lazily-structured naturals.
//!
//! Values bound by a sampler `bind` are passed unforced. Reals already are
//! precision-indexed functions; naturals and booleans are wrapped here.

use std::fmt;
use std::sync::{Arc, LazyLock};

use crate::error::{DivergeReason, Error, Result};
use crate::exactreal::CReal;

type ThunkFn<T> = Box<dyn FnOnce() -> Result<T> + Send>;

/// A computation run at most once; its result (value or error) is cached.
pub struct Thunk<T>(Arc<LazyLock<Result<T>, ThunkFn<T>>>);

impl<T> Clone for Thunk<T> {
    fn clone(&self) -> Self {
        Thunk(Arc::clone(&self.0))
    }
}

impl<T> fmt::Debug for Thunk<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Thunk(..)")
    }
}

impl<T: Clone + Send + Sync + 'static> Thunk<T> {
    pub fn new<F>(f: F) -> Self
    where
        F: FnOnce() -> Result<T> + Send + 'static,
    {
        Thunk(Arc::new(LazyLock::new(Box::new(f) as ThunkFn<T>)))
    }

    pub fn ready(value: T) -> Self {
        Self::new(move || Ok(value))
    }

    pub fn failed(err: Error) -> Self {
        Self::new(move || Err(err))
    }

    /// The value whose forcing never returns.
    pub fn bottom() -> Self {
        Self::failed(Error::diverged(DivergeReason::BottomValue))
    }

    pub fn force(&self) -> Result<T> {
        (*self.0).clone()
    }

    pub fn map<U, G>(&self, g: G) -> Thunk<U>
    where
        U: Clone + Send + Sync + 'static,
        G: FnOnce(T) -> Result<U> + Send + 'static,
    {
        let me = self.clone();
        Thunk::new(move || g(me.force()?))
    }
}

/// Types that can absorb a not-yet-computed value of themselves without
/// forcing it. `bind` relies on this to pass sampled values lazily.
pub trait Deferred: Sized + Clone + Send + Sync + 'static {
    fn defer(thunk: Thunk<Self>) -> Self;
}

impl Deferred for CReal {
    fn defer(thunk: Thunk<Self>) -> Self {
        CReal::deferred(thunk)
    }
}

impl<T: Clone + Send + Sync + 'static> Deferred for Thunk<T> {
    fn defer(thunk: Thunk<Self>) -> Self {
        Thunk::new(move || thunk.force()?.force())
    }
}

impl<A: Deferred, B: Deferred> Deferred for (A, B) {
    fn defer(thunk: Thunk<Self>) -> Self {
        let a = A::defer(thunk.map(|p| Ok(p.0)));
        let b = B::defer(thunk.map(|p| Ok(p.1)));
        (a, b)
    }
}

/// Booleans produced by samplers are always lazy.
pub type LazyBool = Thunk<bool>;

/// A natural built from literals, `succ` and deferred computations.
///
/// Eliminators force the whole number, so observationally this is the flat
/// lifted naturals. The structure is only exploited by [`LazyNat::knowledge`],
/// which reports how many `succ` layers are certain before a failure: a value
/// `succ(succ(?))` is `>= 2` or bottom, and in either case outside `{1}`.
#[derive(Clone)]
pub struct LazyNat(Arc<NatNode>);

enum NatNode {
    Lit(u64),
    Succ(LazyNat),
    Deferred(Thunk<LazyNat>),
}

/// What can be said about a [`LazyNat`] without an unbounded computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatKnowledge {
    Exact(u64),
    /// At least this many `succ` layers, then a computation that failed.
    AtLeast(u64, Error),
}

impl fmt::Debug for LazyNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.knowledge() {
            NatKnowledge::Exact(n) => write!(f, "LazyNat({n})"),
            NatKnowledge::AtLeast(n, _) => write!(f, "LazyNat(>={n}, ..)"),
        }
    }
}

impl LazyNat {
    pub fn new(n: u64) -> Self {
        LazyNat(Arc::new(NatNode::Lit(n)))
    }

    pub fn succ(&self) -> Self {
        LazyNat(Arc::new(NatNode::Succ(self.clone())))
    }

    pub fn bottom() -> Self {
        Self::defer(Thunk::bottom())
    }

    pub fn force(&self) -> Result<u64> {
        match self.knowledge() {
            NatKnowledge::Exact(n) => Ok(n),
            NatKnowledge::AtLeast(_, e) => Err(e),
        }
    }

    pub fn knowledge(&self) -> NatKnowledge {
        let mut layers = 0u64;
        let mut cur = self.clone();
        loop {
            let next = match &*cur.0 {
                NatNode::Lit(n) => return NatKnowledge::Exact(layers + n),
                NatNode::Succ(p) => {
                    layers += 1;
                    p.clone()
                }
                NatNode::Deferred(t) => match t.force() {
                    Ok(v) => v,
                    Err(e) => return NatKnowledge::AtLeast(layers, e),
                },
            };
            cur = next;
        }
    }
}

impl Deferred for LazyNat {
    fn defer(thunk: Thunk<Self>) -> Self {
        LazyNat(Arc::new(NatNode::Deferred(thunk)))
    }
}

impl From<u64> for LazyNat {
    fn from(n: u64) -> Self {
        LazyNat::new(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    #[test]
    fn thunk_runs_once() {
        let hits = Arc::new(AtomicUsize::new(0));
        let h = hits.clone();
        let t = Thunk::new(move || {
            h.fetch_add(1, Ordering::SeqCst);
            Ok(7u64)
        });
        assert_eq!(t.force().unwrap(), 7);
        assert_eq!(t.clone().force().unwrap(), 7);
        assert_eq!(hits.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn succ_of_bottom_is_partially_known() {
        let n = LazyNat::bottom().succ().succ();
        assert!(matches!(
            n.knowledge(),
            NatKnowledge::AtLeast(2, Error::Diverged(_))
        ));
        assert!(n.force().is_err());
        assert_eq!(LazyNat::new(3).succ().force().unwrap(), 4);
    }

    #[test]
    fn deferred_pair_shares_one_computation() {
        let hits = Arc::new(AtomicUsize::new(0));
        let h = hits.clone();
        let t: Thunk<(LazyNat, LazyNat)> = Thunk::new(move || {
            h.fetch_add(1, Ordering::SeqCst);
            Ok((LazyNat::new(1), LazyNat::new(2)))
        });
        let (a, b) = <(LazyNat, LazyNat)>::defer(t);
        assert_eq!(hits.load(Ordering::SeqCst), 0);
        assert_eq!(a.force().unwrap() + b.force().unwrap(), 3);
        assert_eq!(hits.load(Ordering::SeqCst), 1);
    }
}
