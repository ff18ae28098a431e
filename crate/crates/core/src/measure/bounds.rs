//! Certified and statistical bounds on pushforward measures and integrals.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::observe::{Membership, Observe};
use super::openset::OpenSet;
use crate::error::{Error, Result};
use crate::exactreal::rational::{format_rational, int, pow2, round_up};
use crate::exactreal::{enclosure_radius, ops, CReal, Interval, Rational};
use crate::sampler::{BitTape, Sampler};

/// Largest accepted prefix length for exhaustive enumeration.
pub const MAX_PREFIX_BITS: u32 = 24;

/// Precision at which Monte Carlo integrands are evaluated.
pub const MC_PRECISION: u32 = 24;

pub(crate) fn ser_rational<S: Serializer>(
    q: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

fn ser_opt_rational<S: Serializer>(
    q: &Option<Rational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

/// Per-class sample counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub inside: u64,
    pub outside: u64,
    pub straddle: u64,
    pub failed: u64,
}

impl Tally {
    pub fn record(mut self, m: Membership) -> Self {
        match m {
            Membership::Inside => self.inside += 1,
            Membership::Outside => self.outside += 1,
            Membership::Straddle => self.straddle += 1,
            Membership::Failed => self.failed += 1,
        }
        self
    }

    pub fn merge(self, o: Tally) -> Tally {
        Tally {
            inside: self.inside + o.inside,
            outside: self.outside + o.outside,
            straddle: self.straddle + o.straddle,
            failed: self.failed + o.failed,
        }
    }

    pub fn total(&self) -> u64 {
        self.inside + self.outside + self.straddle + self.failed
    }
}

/// Lower and upper bounds on the measure of an open set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureBounds {
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
    /// Prefix length for enumeration; zero for Monte Carlo.
    pub prefix_bits: u32,
    pub precision: u32,
    #[serde(flatten)]
    pub tally: Tally,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    /// Hoeffding half-width used for Monte Carlo bounds.
    #[serde(
        skip_serializing_if = "Option::is_none",
        serialize_with = "ser_opt_rational"
    )]
    pub half_width: Option<Rational>,
}

impl MeasureBounds {
    pub fn width(&self) -> Rational {
        &self.upper - &self.lower
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lower <= q && q <= &self.upper
    }
}

pub(crate) fn check_prefix_bits(k: u32) -> Result<()> {
    if k > MAX_PREFIX_BITS {
        return Err(Error::InvalidArgument(format!(
            "prefix length {k} exceeds the cap of {MAX_PREFIX_BITS}"
        )));
    }
    Ok(())
}

/// Runs `s` on every length-`k` prefix tape and folds the outcomes.
/// Prefix `p` puts bit `i` of `p` at tape position `i`.
pub fn fold_prefixes<X, A, F, M>(s: &Sampler<X>, k: u32, init: A, step: F, merge: M) -> Result<A>
where
    X: Clone + Send + Sync + 'static,
    A: Clone + Send + Sync,
    F: Fn(A, Result<X>) -> A + Send + Sync,
    M: Fn(A, A) -> A + Send + Sync,
{
    check_prefix_bits(k)?;
    Ok((0..1u64 << k)
        .into_par_iter()
        .fold(
            || init.clone(),
            |acc, p| step(acc, s.run(&BitTape::from_word(p, k))),
        )
        .reduce(|| init.clone(), &merge))
}

fn membership<X: Observe>(run: Result<X>, set: &OpenSet, n: u32) -> Result<Membership> {
    match run {
        Ok(x) => x.classify(set, n),
        Err(_) if set.is_empty() => Ok(Membership::Outside),
        Err(_) => Ok(Membership::Failed),
    }
}

/// Exhaustive bounds from all `2^k` prefixes: `lower = #inside / 2^k` and
/// `upper = 1 - #outside / 2^k`.
pub fn measure_bounds<X: Observe>(
    s: &Sampler<X>,
    set: &OpenSet,
    k: u32,
    n: u32,
) -> Result<MeasureBounds> {
    let tally = fold_prefixes(
        s,
        k,
        Ok(Tally::default()),
        |acc: Result<Tally>, run| Ok(acc?.record(membership(run, set, n)?)),
        |a, b| Ok(a?.merge(b?)),
    )??;
    let denom = pow2(k as i64);
    let lower = Rational::from_integer(tally.inside.into()) / &denom;
    let upper = Rational::one() - Rational::from_integer(tally.outside.into()) / &denom;
    Ok(MeasureBounds {
        lower,
        upper,
        prefix_bits: k,
        precision: n,
        tally,
        samples: None,
        half_width: None,
    })
}

/// A rational upper bound on `sqrt(ln(2/delta) / (2N))`.
pub fn hoeffding_half_width(samples: u64, delta: &Rational) -> Result<Rational> {
    if samples == 0 {
        return Err(Error::InvalidArgument(
            "at least one sample is required".into(),
        ));
    }
    if !(delta.is_positive() && *delta < Rational::one()) {
        return Err(Error::InvalidArgument(
            "confidence parameter must lie in (0, 1)".into(),
        ));
    }
    let ratio = CReal::from_rational(int(2) / delta);
    let radicand = ops::scale(
        &ops::log(&ratio),
        &Rational::new(BigInt::one(), BigInt::from(2 * samples)),
    );
    let eps = ops::sqrt(&radicand);
    let bits = 40;
    Ok(round_up(eps.enclosure(bits)?.hi(), bits))
}

/// Sample `i` of a Monte Carlo run with base seed `seed` uses this tape seed.
pub fn mc_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_add(i)
}

/// Monte Carlo bounds holding with probability at least `1 - delta`.
/// Straddling and failed samples count toward the upper bound only.
pub fn measure_mc<X: Observe>(
    s: &Sampler<X>,
    set: &OpenSet,
    samples: u64,
    seed: u64,
    n: u32,
    delta: &Rational,
) -> Result<MeasureBounds> {
    let eps = hoeffding_half_width(samples, delta)?;
    let tally = (0..samples)
        .into_par_iter()
        .map(|i| membership(s.run(&BitTape::prng(mc_seed(seed, i))), set, n))
        .try_fold(Tally::default, |acc, m| m.map(|m| acc.record(m)))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let total = Rational::from_integer(samples.into());
    let lo_freq = Rational::from_integer(tally.inside.into()) / &total;
    let hi_freq = Rational::from_integer((samples - tally.outside).into()) / &total;
    let lower = (lo_freq - &eps).max(Rational::zero());
    let upper = (hi_freq + &eps).min(Rational::one());
    Ok(MeasureBounds {
        lower,
        upper,
        prefix_bits: 0,
        precision: n,
        tally,
        samples: Some(samples),
        half_width: Some(eps),
    })
}

/// Integrand with a bound `|f| <= bound` and Lipschitz constant on the sampler's range.
pub type Integrand = dyn Fn(&CReal) -> CReal + Send + Sync;

fn clip(iv: (Rational, Rational), bound: &Rational) -> (Rational, Rational) {
    let neg = -bound.clone();
    (
        iv.0.max(neg.clone()).min(bound.clone()),
        iv.1.min(bound.clone()).max(neg),
    )
}

/// Certified enclosure of `∫ f dμ_s` by prefix enumeration.
///
/// On each prefix the sample's enclosure at precision `n` has midpoint `q`
/// and radius `r`; the prefix contributes `f(q) ± lipschitz * r`, or
/// `[-bound, bound]` when the sample or `f(q)` cannot be computed.
pub fn integrate_enum(
    s: &Sampler<CReal>,
    f: &Integrand,
    bound: &Rational,
    lipschitz: &Rational,
    k: u32,
    n: u32,
) -> Result<Interval> {
    let slack = (-bound.clone(), bound.clone());
    let spread = lipschitz * enclosure_radius(n);
    let piece = |run: Result<CReal>| -> (Rational, Rational) {
        let Ok(x) = run else { return slack.clone() };
        let Ok(q) = x.approx(n) else {
            return slack.clone();
        };
        let Ok(fq) = f(&CReal::from_rational(q)).enclosure(n) else {
            return slack.clone();
        };
        clip((fq.lo() - &spread, fq.hi() + &spread), bound)
    };
    let (lo, hi) = fold_prefixes(
        s,
        k,
        (Rational::zero(), Rational::zero()),
        |acc, run| {
            let (a, b) = piece(run);
            (acc.0 + a, acc.1 + b)
        },
        |x, y| (x.0 + y.0, x.1 + y.1),
    )?;
    let denom = pow2(k as i64);
    Interval::new(lo / &denom, hi / &denom)
}

/// Monte Carlo enclosure of `∫ f dμ_s`, valid with probability `1 - delta`.
///
/// Each value `f(x)` is clipped to `[-bound, bound]`, a range of width
/// `2 bound`, so the Hoeffding half-width is `2 bound sqrt(ln(2/delta)/(2N))`.
/// Failed samples contribute the whole range.
pub fn integrate_mc(
    s: &Sampler<CReal>,
    f: &Integrand,
    bound: &Rational,
    samples: u64,
    seed: u64,
    delta: &Rational,
) -> Result<Interval> {
    let eps = hoeffding_half_width(samples, delta)? * int(2) * bound;
    let slack = (-bound.clone(), bound.clone());
    let (lo, hi) = (0..samples)
        .into_par_iter()
        .map(|i| {
            let run = s.run(&BitTape::prng(mc_seed(seed, i)));
            let Ok(x) = run else { return slack.clone() };
            match f(&x).enclosure(MC_PRECISION) {
                Ok(iv) => clip((iv.lo().clone(), iv.hi().clone()), bound),
                Err(_) => slack.clone(),
            }
        })
        .reduce(
            || (Rational::zero(), Rational::zero()),
            |x, y| (x.0 + y.0, x.1 + y.1),
        );
    let total = Rational::from_integer(samples.into());
    Interval::new(lo / &total - &eps, hi / &total + &eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::rat;
    use crate::sampler::{ret, std_geometric, std_uniform};

    #[test]
    fn point_mass_is_exact() {
        let s = ret(CReal::from_rational(rat(1, 4)));
        let u = OpenSet::interval(int(0), rat(1, 2)).unwrap();
        for k in [0, 3, 8] {
            let b = measure_bounds(&s, &u, k, 6).unwrap();
            assert_eq!((b.lower, b.upper), (int(1), int(1)));
        }
    }

    #[test]
    fn geometric_singleton_exact() {
        let b = measure_bounds(&std_geometric(), &OpenSet::nats([1]), 8, 0).unwrap();
        assert_eq!((b.lower.clone(), b.upper.clone()), (rat(1, 2), rat(1, 2)));
    }

    #[test]
    fn uniform_half() {
        let b = measure_bounds(
            &std_uniform(),
            &OpenSet::interval(int(0), rat(1, 2)).unwrap(),
            12,
            10,
        )
        .unwrap();
        assert!(b.contains(&rat(1, 2)));
        assert!(b.lower >= rat(45, 100) && b.upper <= rat(55, 100));
        assert_eq!(b.tally.total(), 1 << 12);
    }

    #[test]
    fn prefix_cap() {
        assert!(measure_bounds(&std_uniform(), &OpenSet::nats([1]), 25, 0).is_err());
    }

    #[test]
    fn hoeffding_matches_formula() {
        let eps = hoeffding_half_width(10_000, &rat(1, 100)).unwrap();
        let exact = ((2.0f64 / 0.01).ln() / 20_000.0).sqrt();
        let got = crate::exactreal::rational::to_f64(&eps);
        assert!(got >= exact && got - exact < 1e-9, "{got} vs {exact}");
    }

    #[test]
    fn json_fields() {
        let b = measure_bounds(&std_geometric(), &OpenSet::nats([2]), 6, 0).unwrap();
        let v = serde_json::to_value(&b).unwrap();
        assert_eq!(v["lower"], "1/4");
        assert_eq!(v["prefix_bits"], 6);
        assert!(v.get("samples").is_none());
    }
}
