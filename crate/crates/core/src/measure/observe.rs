//! Locating sampled values relative to open sets.

use crate::error::{Error, Result};
use crate::exactreal::{CReal, Interval};
use crate::lazy::{LazyBool, LazyNat, NatKnowledge};

use super::openset::OpenSet;

/// What a finite amount of work reveals about a sampled value.
#[derive(Clone, Debug)]
pub enum Located {
    /// Enclosures of each real coordinate.
    Reals(Vec<Interval>),
    Nat(NatKnowledge),
    Bool(bool),
    Failed(Error),
}

/// Outcome of comparing a located value with an open set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Inside,
    Outside,
    Straddle,
    Failed,
}

/// Values whose position relative to an open set can be certified.
pub trait Observe: Clone + Send + Sync + 'static {
    fn locate(&self, precision: u32) -> Located;

    fn classify(&self, set: &OpenSet, precision: u32) -> Result<Membership> {
        if set.is_empty() {
            return Ok(Membership::Outside);
        }
        classify(&self.locate(precision), set)
    }
}

impl Observe for CReal {
    fn locate(&self, precision: u32) -> Located {
        match self.enclosure(precision) {
            Ok(iv) => Located::Reals(vec![iv]),
            Err(e) => Located::Failed(e),
        }
    }
}

impl Observe for LazyNat {
    fn locate(&self, _precision: u32) -> Located {
        Located::Nat(self.knowledge())
    }
}

impl Observe for LazyBool {
    fn locate(&self, _precision: u32) -> Located {
        match self.force() {
            Ok(b) => Located::Bool(b),
            Err(e) => Located::Failed(e),
        }
    }
}

impl Observe for (CReal, CReal) {
    fn locate(&self, precision: u32) -> Located {
        match (self.0.enclosure(precision), self.1.enclosure(precision)) {
            (Ok(a), Ok(b)) => Located::Reals(vec![a, b]),
            (Err(e), _) | (_, Err(e)) => Located::Failed(e),
        }
    }
}

fn mismatch(loc: &Located, set: &OpenSet) -> Error {
    let kind = match loc {
        Located::Reals(v) => format!("a point of R^{}", v.len()),
        Located::Nat(_) => "a natural".into(),
        Located::Bool(_) => "a boolean".into(),
        Located::Failed(_) => "a failed value".into(),
    };
    Error::InvalidArgument(format!("cannot test {kind} against the open set {set}"))
}

pub fn classify(loc: &Located, set: &OpenSet) -> Result<Membership> {
    if set.is_empty() {
        return Ok(Membership::Outside);
    }
    match (loc, set) {
        (Located::Failed(_), _) => Ok(Membership::Failed),
        (Located::Reals(point), OpenSet::RealBoxes(boxes)) => {
            if let Some(b) = boxes.first() {
                if b.dim() != point.len() {
                    return Err(mismatch(loc, set));
                }
            }
            if boxes.iter().any(|b| b.contains(point)) {
                Ok(Membership::Inside)
            } else if boxes.iter().all(|b| b.misses(point)) {
                Ok(Membership::Outside)
            } else {
                Ok(Membership::Straddle)
            }
        }
        (Located::Nat(NatKnowledge::Exact(n)), OpenSet::NatSet(s)) => Ok(if s.contains(*n) {
            Membership::Inside
        } else {
            Membership::Outside
        }),
        // The value is at least `m` or undefined; either way it avoids a set
        // with no members from `m` on.
        (Located::Nat(NatKnowledge::AtLeast(m, _)), OpenSet::NatSet(s)) => {
            Ok(if s.has_member_at_least(*m) {
                Membership::Failed
            } else {
                Membership::Outside
            })
        }
        (
            Located::Bool(b),
            OpenSet::BoolSet {
                has_true,
                has_false,
            },
        ) => Ok(if (*b && *has_true) || (!*b && *has_false) {
            Membership::Inside
        } else {
            Membership::Outside
        }),
        _ => Err(mismatch(loc, set)),
    }
}
