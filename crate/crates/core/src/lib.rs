//! Exact computable distributions.
//!
//! Reals are memoized fast Cauchy sequences of rationals ([`exactreal`]),
//! distributions are samplers over read-tracking bit tapes ([`sampler`]),
//! their pushforward measures are bounded by exhaustive prefix enumeration
//! ([`measure`]), posteriors come from bounded densities ([`condition`]) and
//! [`lang`] interprets a small call-by-name PCF with reals and a
//! distribution monad on top of all of it.

pub mod condition;
pub mod error;
pub mod exactreal;
pub mod lang;
pub mod lazy;
pub mod measure;
pub mod sampler;

pub use condition::{BndDens, Center};
pub use error::{DivergeReason, Error, Result};
pub use exactreal::{CReal, Interval, Rational};
pub use lazy::{Deferred, LazyBool, LazyNat, NatKnowledge, Thunk};
pub use measure::{DiscreteMeasure, MeasureBounds, Observe, OpenSet};
pub use sampler::{bind, ret, BitTape, Fuel, Sampler};
