//! Open sets in the spaces samplers produce values in.
//!
//! Membership of an enclosure is decided exactly: a closed rational interval
//! is inside an open box when every side is strictly inside, and outside when
//! it misses the box entirely.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactreal::rational::{format_rational, parse_rational};
use crate::exactreal::{Interval, Rational};

/// One endpoint of an open interval; `None` is the infinite end.
pub type Endpoint = Option<Rational>;

/// An open interval `(lo, hi)` with possibly infinite ends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OpenInterval {
    pub lo: Endpoint,
    pub hi: Endpoint,
}

impl OpenInterval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self> {
        if let (Some(a), Some(b)) = (&lo, &hi) {
            if a >= b {
                return Err(Error::InvalidArgument(format!(
                    "empty interval ({}, {})",
                    format_rational(a),
                    format_rational(b)
                )));
            }
        }
        Ok(OpenInterval { lo, hi })
    }

    pub fn finite(lo: Rational, hi: Rational) -> Result<Self> {
        Self::new(Some(lo), Some(hi))
    }

    pub fn whole() -> Self {
        OpenInterval { lo: None, hi: None }
    }

    /// The closed interval lies strictly inside.
    pub fn contains_interval(&self, iv: &Interval) -> bool {
        self.lo.as_ref().is_none_or(|a| a < iv.lo()) && self.hi.as_ref().is_none_or(|b| iv.hi() < b)
    }

    /// The closed interval misses this open interval.
    pub fn misses_interval(&self, iv: &Interval) -> bool {
        self.lo.as_ref().is_some_and(|a| iv.hi() <= a)
            || self.hi.as_ref().is_some_and(|b| b <= iv.lo())
    }

    pub fn contains_point(&self, q: &Rational) -> bool {
        self.lo.as_ref().is_none_or(|a| a < q) && self.hi.as_ref().is_none_or(|b| q < b)
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self.lo.as_ref().map_or("-inf".to_string(), short);
        let hi = self.hi.as_ref().map_or("inf".to_string(), short);
        write!(f, "({lo},{hi})")
    }
}

fn short(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format_rational(q)
    }
}

/// A product of open intervals.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RealBox(pub Vec<OpenInterval>);

impl RealBox {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, point: &[Interval]) -> bool {
        point.len() == self.dim()
            && self
                .0
                .iter()
                .zip(point)
                .all(|(side, iv)| side.contains_interval(iv))
    }

    pub fn misses(&self, point: &[Interval]) -> bool {
        point.len() != self.dim()
            || self
                .0
                .iter()
                .zip(point)
                .any(|(side, iv)| side.misses_interval(iv))
    }

    /// `other` is a sub-box of `self`.
    fn covers(&self, other: &RealBox) -> bool {
        let le = |a: &Endpoint, b: &Endpoint| match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => x <= y,
        };
        let ge = |a: &Endpoint, b: &Endpoint| match (a, b) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(x), Some(y)) => x >= y,
        };
        self.dim() == other.dim()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(s, o)| le(&s.lo, &o.lo) && ge(&s.hi, &o.hi))
    }
}

impl fmt::Display for RealBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sides: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&sides.join("×"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatSet {
    Finite(BTreeSet<u64>),
    /// Every natural except the listed ones.
    Cofinite(BTreeSet<u64>),
}

impl NatSet {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            NatSet::Finite(s) => s.contains(&n),
            NatSet::Cofinite(s) => !s.contains(&n),
        }
    }

    /// Whether some member is `>= m`.
    pub fn has_member_at_least(&self, m: u64) -> bool {
        match self {
            NatSet::Finite(s) => s.range(m..).next().is_some(),
            NatSet::Cofinite(_) => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpenSet {
    /// A union of boxes of one common dimension.
    RealBoxes(Vec<RealBox>),
    NatSet(NatSet),
    BoolSet {
        has_true: bool,
        has_false: bool,
    },
}

impl OpenSet {
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(OpenSet::RealBoxes(vec![RealBox(vec![OpenInterval::finite(lo, hi)?])]).canonical())
    }

    /// The whole real line.
    pub fn reals() -> Self {
        OpenSet::RealBoxes(vec![RealBox(vec![OpenInterval::whole()])])
    }

    pub fn boxes(boxes: Vec<RealBox>) -> Result<Self> {
        if let Some(first) = boxes.first() {
            if boxes.iter().any(|b| b.dim() != first.dim()) {
                return Err(Error::InvalidArgument(
                    "boxes of different dimensions in one union".into(),
                ));
            }
        }
        Ok(OpenSet::RealBoxes(boxes).canonical())
    }

    pub fn nats<I: IntoIterator<Item = u64>>(ns: I) -> Self {
        OpenSet::NatSet(NatSet::Finite(ns.into_iter().collect()))
    }

    pub fn nats_except<I: IntoIterator<Item = u64>>(ns: I) -> Self {
        OpenSet::NatSet(NatSet::Cofinite(ns.into_iter().collect()))
    }

    pub fn bools(has_true: bool, has_false: bool) -> Self {
        OpenSet::BoolSet {
            has_true,
            has_false,
        }
    }

    /// Merges overlapping one-dimensional intervals and drops covered boxes.
    pub fn canonical(self) -> Self {
        match self {
            OpenSet::RealBoxes(mut boxes) => {
                boxes.sort();
                boxes.dedup();
                if boxes.iter().all(|b| b.dim() == 1) {
                    OpenSet::RealBoxes(merge_line(boxes))
                } else {
                    let kept: Vec<RealBox> = boxes
                        .iter()
                        .enumerate()
                        .filter(|(i, b)| {
                            !boxes
                                .iter()
                                .enumerate()
                                .any(|(j, o)| j != *i && o.covers(b))
                        })
                        .map(|(_, b)| b.clone())
                        .collect();
                    OpenSet::RealBoxes(kept)
                }
            }
            other => other,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            OpenSet::RealBoxes(b) => b.is_empty(),
            OpenSet::NatSet(NatSet::Finite(ns)) => ns.is_empty(),
            OpenSet::NatSet(NatSet::Cofinite(_)) => false,
            OpenSet::BoolSet {
                has_true,
                has_false,
            } => !has_true && !has_false,
        }
    }

    /// Dimension of real points this set accepts, if it is a set of reals.
    pub fn real_dim(&self) -> Option<usize> {
        match self {
            OpenSet::RealBoxes(b) => Some(b.first().map_or(0, RealBox::dim)),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_open_set(s)
    }
}

/// Merges sorted open intervals whose overlap is nonempty; touching ends stay apart.
fn merge_line(boxes: Vec<RealBox>) -> Vec<RealBox> {
    let mut out: Vec<OpenInterval> = Vec::new();
    for b in boxes {
        let iv = b.0.into_iter().next().expect("dimension one");
        if let Some(last) = out.last_mut() {
            let overlaps = match (&last.hi, &iv.lo) {
                (None, _) | (_, None) => true,
                (Some(h), Some(l)) => l < h,
            };
            if overlaps {
                let extend = match (&last.hi, &iv.hi) {
                    (None, _) => false,
                    (_, None) => true,
                    (Some(a), Some(b)) => b > a,
                };
                if extend {
                    last.hi = iv.hi;
                }
                continue;
            }
        }
        out.push(iv);
    }
    out.into_iter().map(|iv| RealBox(vec![iv])).collect()
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSet::RealBoxes(boxes) if boxes.is_empty() => f.write_str("∅"),
            OpenSet::RealBoxes(boxes) => {
                let parts: Vec<String> = boxes.iter().map(|b| b.to_string()).collect();
                f.write_str(&parts.join("∪"))
            }
            OpenSet::NatSet(NatSet::Finite(s)) => write!(f, "{{{}}}", join_nats(s)),
            OpenSet::NatSet(NatSet::Cofinite(s)) => write!(f, "N\\{{{}}}", join_nats(s)),
            OpenSet::BoolSet {
                has_true,
                has_false,
            } => {
                let mut parts = Vec::new();
                if *has_false {
                    parts.push("false");
                }
                if *has_true {
                    parts.push("true");
                }
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl Serialize for OpenSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn join_nats(s: &BTreeSet<u64>) -> String {
    s.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_endpoint(s: &str) -> Result<(bool, Endpoint)> {
    let t = s.trim();
    match t {
        "inf" | "+inf" | "∞" | "+∞" => Ok((true, None)),
        "-inf" | "-∞" => Ok((false, None)),
        _ => Ok((true, Some(parse_rational(t)?))),
    }
}

fn parse_interval(s: &str) -> Result<OpenInterval> {
    let bad = || Error::InvalidArgument(format!("not an open interval: {s:?}"));
    let body = s
        .trim()
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (a, b) = body.split_once(',').ok_or_else(bad)?;
    let (lo_pos, lo) = parse_endpoint(a)?;
    let (hi_pos, hi) = parse_endpoint(b)?;
    if (lo.is_none() && lo_pos) || (hi.is_none() && !hi_pos) {
        return Err(bad());
    }
    OpenInterval::new(lo, hi)
}

fn parse_box(s: &str) -> Result<RealBox> {
    let sides = s
        .split(['×', '*'])
        .map(parse_interval)
        .collect::<Result<Vec<_>>>()?;
    Ok(RealBox(sides))
}

fn parse_braced(body: &str) -> Result<OpenSet> {
    let items: Vec<&str> = body
        .split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .collect();
    if !items.is_empty() && items.iter().all(|x| *x == "true" || *x == "false") {
        return Ok(OpenSet::bools(
            items.contains(&"true"),
            items.contains(&"false"),
        ));
    }
    let nats = items
        .iter()
        .map(|x| {
            x.parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("not a natural: {x:?}")))
        })
        .collect::<Result<BTreeSet<_>>>()?;
    Ok(OpenSet::NatSet(NatSet::Finite(nats)))
}

/// Accepts `(a,b)` unions joined by `∪`, `U` or `|`, boxes `(a,b)×(c,d)`,
/// finite naturals `{1,2,3}`, cofinite naturals `N\{0,1}`, and `{true}`-style
/// boolean sets. Endpoints may be `inf`/`-inf`.
pub fn parse_open_set(s: &str) -> Result<OpenSet> {
    let t = s.trim();
    for prefix in ["N\\", "ℕ\\", "ℕ∖", "N∖"] {
        if let Some(rest) = t.strip_prefix(prefix) {
            let body = rest
                .trim()
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'));
            let body =
                body.ok_or_else(|| Error::InvalidArgument(format!("bad cofinite set {s:?}")))?;
            return match parse_braced(body)? {
                OpenSet::NatSet(NatSet::Finite(ex)) => Ok(OpenSet::NatSet(NatSet::Cofinite(ex))),
                _ => Err(Error::InvalidArgument(format!("bad cofinite set {s:?}"))),
            };
        }
    }
    if let Some(body) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return parse_braced(body);
    }
    if t == "∅" {
        return Ok(OpenSet::RealBoxes(Vec::new()));
    }
    let boxes = t
        .split(['∪', '|', 'U'])
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(parse_box)
        .collect::<Result<Vec<_>>>()?;
    if boxes.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "empty open-set literal {s:?}"
        )));
    }
    OpenSet::boxes(boxes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::{int, rat};

    #[test]
    fn parses_unions_and_merges() {
        let u = parse_open_set("(0,1/2)∪(3/4,1)").unwrap();
        assert_eq!(u.to_string(), "(0,1/2)∪(3/4,1)");
        let merged = parse_open_set("(0,1/2) U (1/4,1)").unwrap();
        assert_eq!(merged, OpenSet::interval(int(0), int(1)).unwrap());
        // (0,1/2) and (1/2,1) do not contain 1/2, so they stay apart.
        let touching = parse_open_set("(0,1/2)|(1/2,1)").unwrap();
        assert!(matches!(touching, OpenSet::RealBoxes(ref b) if b.len() == 2));
    }

    #[test]
    fn parses_nats_bools_and_boxes() {
        assert_eq!(parse_open_set("{1,2,3}").unwrap(), OpenSet::nats([1, 2, 3]));
        assert_eq!(parse_open_set("N\\{0}").unwrap(), OpenSet::nats_except([0]));
        assert_eq!(
            parse_open_set("{true}").unwrap(),
            OpenSet::bools(true, false)
        );
        let b = parse_open_set("(0,1)×(-inf,2)").unwrap();
        assert_eq!(b.real_dim(), Some(2));
        assert!(parse_open_set("(1,0)").is_err());
        assert!(parse_open_set("(inf,0)").is_err());
        assert!(parse_open_set("{a}").is_err());
    }

    #[test]
    fn interval_membership_is_strict() {
        let side = OpenInterval::finite(int(0), rat(1, 2)).unwrap();
        let inside = Interval::new(rat(1, 8), rat(3, 8)).unwrap();
        let touching = Interval::new(rat(1, 4), rat(1, 2)).unwrap();
        let beyond = Interval::new(rat(1, 2), int(1)).unwrap();
        assert!(side.contains_interval(&inside));
        assert!(!side.contains_interval(&touching) && !side.misses_interval(&touching));
        assert!(side.misses_interval(&beyond));
    }

    #[test]
    fn covered_boxes_are_dropped() {
        let big = parse_box("(0,2)×(0,2)").unwrap();
        let small = parse_box("(1/2,1)×(1/2,1)").unwrap();
        let OpenSet::RealBoxes(b) = OpenSet::boxes(vec![small, big.clone()]).unwrap() else {
            unreachable!()
        };
        assert_eq!(b, vec![big]);
    }
}
