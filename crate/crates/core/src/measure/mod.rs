//! Pushforward measures of samplers.
//!
//! A sampler's distribution is the image of the fair-coin measure on tapes.
//! Enumerating every length-`k` prefix gives a certified lower bound on the
//! measure of an open set (prefixes whose sample is provably inside) and an
//! upper bound (one minus prefixes provably outside).

pub mod bounds;
pub mod discrete;
pub mod observe;
pub mod openset;

pub use bounds::{
    fold_prefixes, hoeffding_half_width, integrate_enum, integrate_mc, mc_seed, measure_bounds,
    measure_mc, Integrand, MeasureBounds, Tally, MAX_PREFIX_BITS, MC_PRECISION,
};
pub use discrete::{geometric_truncation, val_bind, val_ret, DiscreteMeasure};
pub use observe::{classify, Located, Membership, Observe};
pub use openset::{parse_open_set, NatSet, OpenInterval, OpenSet, RealBox};
