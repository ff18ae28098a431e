use serde::{Deserialize, Serialize};

use super::rational::{format_rational, midpoint, parse_rational, Rational};
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval bounds out of order: [{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    /// `[center - radius, center + radius]`; `radius` must be non-negative.
    pub fn around(center: &Rational, radius: &Rational) -> Self {
        debug_assert!(*radius >= Rational::from_integer(0.into()));
        Interval {
            lo: center - radius,
            hi: center + radius,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        midpoint(&self.lo, &self.hi)
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn to_json(&self, precision: u32) -> EnclosureJson {
        EnclosureJson {
            lo: format_rational(&self.lo),
            hi: format_rational(&self.hi),
            precision,
        }
    }
}

/// Wire form of an enclosure: `{"lo":"p/q","hi":"p/q","precision":n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
    pub precision: u32,
}

impl EnclosureJson {
    pub fn to_interval(&self) -> Result<Interval> {
        Interval::new(parse_rational(&self.lo)?, parse_rational(&self.hi)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::rat;

    #[test]
    fn rejects_reversed_bounds() {
        assert!(Interval::new(rat(1, 2), rat(1, 3)).is_err());
    }

    #[test]
    fn json_shape() {
        let iv = Interval::new(rat(-1, 4), rat(1, 4)).unwrap();
        let s = serde_json::to_string(&iv.to_json(3)).unwrap();
        assert_eq!(s, r#"{"lo":"-1/4","hi":"1/4","precision":3}"#);
        let back: EnclosureJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_interval().unwrap(), iv);
    }
}
