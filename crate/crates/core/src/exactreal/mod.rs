//! Exact real arithmetic over arbitrary-precision rationals.

mod creal;
mod dense;
mod interval;
pub mod ops;
pub mod rational;

pub use creal::{enclosure_radius, CReal};
pub use dense::{dyadic_enum, DenseEnum};
pub use interval::{EnclosureJson, Interval};
pub use ops::{
    abs, add, arith, clamp, div, euler, exp, exp_bounds, exp_with, log, log_bounds, log_with,
    lt_semi, mul, neg, pi, pi_bounds, reciprocal, reciprocal_with, refinement_precision, scale,
    sqrt, sqrt_with, sub, transcendental, transcendental_with, ArithOp, Comparison,
    TranscendentalOp, DEFAULT_FUEL,
};
pub use rational::{format_rational, parse_rational, Rational};
