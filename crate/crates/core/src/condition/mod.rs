//! Conditioning: observations through bounded densities and positive-probability events.
//!
//! Both operators are rejection realizers. Each round binds a fresh prior
//! draw (even half of the tape) to the acceptance test and the retry (odd
//! half), so rounds never share bits.

pub mod density;

use num_traits::{One, Signed, Zero};

use crate::error::{DivergeReason, Error, Result};
use crate::exactreal::ops::{self, refinement_precision, Comparison};
use crate::exactreal::rational::{format_rational, pow2};
use crate::exactreal::{enclosure_radius, CReal, Rational};
use crate::lazy::{Deferred, LazyBool, LazyNat, NatKnowledge};
use crate::measure::{
    classify, fold_prefixes, DiscreteMeasure, Located, MeasureBounds, Membership, Observe, OpenSet,
    Tally,
};
use crate::sampler::{bind, ret, std_uniform, Fuel, Sampler};

pub use density::{constant, gaussian_noise, laplace_noise, parse_density, BndDens};

/// Values that can be replaced by an exactly known nearby value, for
/// evaluating a density at a point.
pub trait Center: Observe {
    /// A value within the returned distance of `self` (max over coordinates).
    fn center(&self, n: u32) -> Result<(Self, Rational)>;
}

impl Center for CReal {
    fn center(&self, n: u32) -> Result<(Self, Rational)> {
        Ok((CReal::from_rational(self.approx(n)?), enclosure_radius(n)))
    }
}

impl Center for (CReal, CReal) {
    fn center(&self, n: u32) -> Result<(Self, Rational)> {
        let (a, ra) = self.0.center(n)?;
        let (b, rb) = self.1.center(n)?;
        Ok(((a, b), ra.max(rb)))
    }
}

impl Center for LazyNat {
    fn center(&self, _n: u32) -> Result<(Self, Rational)> {
        match self.knowledge() {
            NatKnowledge::Exact(k) => Ok((LazyNat::new(k), Rational::zero())),
            NatKnowledge::AtLeast(_, e) => Err(e),
        }
    }
}

impl Center for LazyBool {
    fn center(&self, _n: u32) -> Result<(Self, Rational)> {
        Ok((LazyBool::ready(self.force()?), Rational::zero()))
    }
}

fn exhausted<X: Clone + Send + Sync + 'static>() -> Sampler<X> {
    Sampler::new(|_| Err(Error::diverged(DivergeReason::Recursion)))
}

/// Rejection sampler for the posterior given observation `y`: draw `x` from
/// the prior and `w` uniformly, accept when `w * bound < dens(x, y)`.
pub fn obs_dens<X: Deferred>(
    prior: &Sampler<X>,
    d: &BndDens<X>,
    y: &CReal,
    fuel: Fuel,
) -> Sampler<X> {
    obs_round(prior.clone(), d.clone(), y.clone(), fuel.recursion, fuel)
}

fn obs_round<X: Deferred>(
    prior: Sampler<X>,
    d: BndDens<X>,
    y: CReal,
    depth: u32,
    fuel: Fuel,
) -> Sampler<X> {
    if depth == 0 {
        return exhausted();
    }
    let next = (prior.clone(), d.clone(), y.clone());
    bind(&prior, move |x: X| {
        let (prior, d, y) = next.clone();
        Ok(bind(&std_uniform(), move |w: CReal| {
            let threshold = ops::scale(&w, &d.bound);
            match ops::lt_semi(&threshold, &d.eval(&x, &y), fuel.comparison)? {
                Comparison::Less => Ok(ret(x.clone())),
                Comparison::Greater => Ok(obs_round(
                    prior.clone(),
                    d.clone(),
                    y.clone(),
                    depth - 1,
                    fuel,
                )),
                Comparison::Undecided => Err(Error::diverged(DivergeReason::Comparison)),
            }
        }))
    })
}

#[derive(Clone)]
struct Sums {
    num: (Rational, Rational),
    den: (Rational, Rational),
    tally: Tally,
}

impl Sums {
    fn zero() -> Self {
        let z = (Rational::zero(), Rational::zero());
        Sums {
            num: z.clone(),
            den: z,
            tally: Tally::default(),
        }
    }

    fn add(mut self, num: (Rational, Rational), den: (Rational, Rational), m: Membership) -> Self {
        self.num = (self.num.0 + num.0, self.num.1 + num.1);
        self.den = (self.den.0 + den.0, self.den.1 + den.1);
        self.tally = self.tally.record(m);
        self
    }

    fn merge(self, o: Sums) -> Self {
        Sums {
            num: (self.num.0 + o.num.0, self.num.1 + o.num.1),
            den: (self.den.0 + o.den.0, self.den.1 + o.den.1),
            tally: self.tally.merge(o.tally),
        }
    }
}

/// Certified bounds on the posterior probability of `set` after observing `y`,
/// as the quotient of enumerated enclosures of `∫_set dens dμ` and `∫ dens dμ`.
///
/// Each prefix evaluates the density at the center of the sample's enclosure
/// at precision `n`, widened by `lipschitz * radius` and clipped to
/// `[0, bound]`. Prefixes whose sample cannot be located contribute
/// `[0, bound]` to both integrals.
/// Lower and upper ends of a contribution.
type Bracket = (Rational, Rational);

pub fn posterior_bounds<X: Center>(
    prior: &Sampler<X>,
    d: &BndDens<X>,
    y: &CReal,
    set: &OpenSet,
    k: u32,
    n: u32,
) -> Result<MeasureBounds> {
    let zero = Rational::zero();
    let slack = (zero.clone(), d.bound.clone());
    let clip = |q: Rational| q.max(zero.clone()).min(d.bound.clone());
    let piece = |run: Result<X>| -> Result<(Bracket, Bracket, Membership)> {
        let Ok(x) = run else {
            return Ok((slack.clone(), slack.clone(), Membership::Failed));
        };
        let m = x.classify(set, n)?;
        let Ok((c, r)) = x.center(n) else {
            return Ok((slack.clone(), slack.clone(), Membership::Failed));
        };
        let Ok(iv) = d.eval(&c, y).enclosure(n) else {
            return Ok((slack.clone(), slack.clone(), m));
        };
        let spread = &d.lipschitz * r;
        let den = (clip(iv.lo() - &spread), clip(iv.hi() + &spread));
        let num = match m {
            Membership::Inside => den.clone(),
            Membership::Outside => (zero.clone(), zero.clone()),
            Membership::Straddle | Membership::Failed => (zero.clone(), den.1.clone()),
        };
        Ok((num, den, m))
    };
    let sums = fold_prefixes(
        prior,
        k,
        Ok(Sums::zero()),
        |acc: Result<Sums>, run| {
            let (num, den, m) = piece(run)?;
            Ok(acc?.add(num, den, m))
        },
        |a, b| Ok(a?.merge(b?)),
    )??;
    let scale = pow2(k as i64);
    let (den_lo, den_hi) = (&sums.den.0 / &scale, &sums.den.1 / &scale);
    if !den_lo.is_positive() {
        return Err(Error::DenominatorIndistinguishableFromZero {
            lo: format_rational(&den_lo),
            hi: format_rational(&den_hi),
        });
    }
    let (num_lo, num_hi) = (&sums.num.0 / &scale, &sums.num.1 / &scale);
    let lower = (num_lo / den_hi).min(Rational::one());
    let upper = (num_hi / den_lo).min(Rational::one());
    Ok(MeasureBounds {
        lower,
        upper,
        prefix_bits: k,
        precision: n,
        tally: sums.tally,
        samples: None,
        half_width: None,
    })
}

/// Rejection sampler for the prior restricted to `set`: redraw until the
/// sample is certified inside, refining it for up to `fuel.comparison` rounds.
pub fn condition_event<X: Observe + Deferred>(
    prior: &Sampler<X>,
    set: &OpenSet,
    fuel: Fuel,
) -> Sampler<X> {
    event_round(prior.clone(), set.clone(), fuel.recursion, fuel)
}

fn event_round<X: Observe + Deferred>(
    prior: Sampler<X>,
    set: OpenSet,
    depth: u32,
    fuel: Fuel,
) -> Sampler<X> {
    if depth == 0 {
        return exhausted();
    }
    let next = (prior.clone(), set.clone());
    bind(&prior, move |x: X| {
        let (prior, set) = next.clone();
        for round in 0..fuel.comparison {
            let loc = x.locate(refinement_precision(round));
            if let Located::Failed(e) | Located::Nat(NatKnowledge::AtLeast(_, e)) = &loc {
                return Err(e.clone());
            }
            match classify(&loc, &set)? {
                Membership::Inside => return Ok(ret(x.clone())),
                Membership::Outside => return Ok(event_round(prior, set, depth - 1, fuel)),
                Membership::Straddle | Membership::Failed => {}
            }
        }
        Err(Error::diverged(DivergeReason::Comparison))
    })
}

/// The exact posterior `μ(x) p(x) / Σ μ p` of a finitely supported prior.
pub fn discrete_posterior<P, F>(prior: &DiscreteMeasure<P>, dens: F) -> Result<DiscreteMeasure<P>>
where
    P: Ord + Clone,
    F: Fn(&P) -> Rational,
{
    let weighted: Vec<(P, Rational)> = prior
        .iter()
        .map(|(p, m)| (p.clone(), m * dens(p)))
        .collect();
    let total: Rational = weighted.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_positive() {
        return Err(Error::DenominatorIndistinguishableFromZero {
            lo: format_rational(&total),
            hi: format_rational(&total),
        });
    }
    DiscreteMeasure::new(
        weighted
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(p, w)| (p, w / &total)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::{int, rat};
    use crate::sampler::{std_geometric, BitTape};

    #[test]
    fn constant_density_accepts_first_draw() {
        let d = constant::<CReal>(&rat(1, 3)).unwrap();
        let post = obs_dens(&std_uniform(), &d, &CReal::from_int(0), Fuel::default());
        for seed in 0..20 {
            let t = BitTape::prng(seed);
            let x = post.run(&t).unwrap();
            let direct = std_uniform().run(&t.split().0).unwrap();
            assert_eq!(x.approx(12).unwrap(), direct.approx(12).unwrap());
        }
    }

    #[test]
    fn zero_density_diverges() {
        let d = BndDens::<CReal>::new("zero", |_, _| CReal::from_int(0), int(1), int(0)).unwrap();
        let post = obs_dens(&std_uniform(), &d, &CReal::from_int(0), Fuel::uniform(8));
        let r = post.run(&BitTape::prng(3)).and_then(|x| x.approx(0));
        assert!(matches!(r, Err(Error::Diverged(_))));
    }

    #[test]
    fn event_conditioning_on_naturals() {
        let s = condition_event(&std_geometric(), &OpenSet::nats([1, 2]), Fuel::default());
        for seed in 0..50 {
            let v = s.run(&BitTape::prng(seed)).unwrap().force().unwrap();
            assert!(v == 1 || v == 2);
        }
    }

    #[test]
    fn discrete_bayes() {
        let prior = DiscreteMeasure::new([(0u64, rat(1, 2)), (1, rat(1, 2))]).unwrap();
        let post =
            discrete_posterior(&prior, |x| if *x == 0 { rat(1, 4) } else { rat(3, 4) }).unwrap();
        assert_eq!(post.mass(&0), rat(1, 4));
        assert_eq!(post.mass(&1), rat(3, 4));
    }

    #[test]
    fn zero_denominator_is_reported() {
        let d = BndDens::<CReal>::new("zero", |_, _| CReal::from_int(0), int(1), int(0)).unwrap();
        let u = OpenSet::interval(int(0), rat(1, 2)).unwrap();
        let r = posterior_bounds(&std_uniform(), &d, &CReal::from_int(0), &u, 4, 6);
        assert!(matches!(
            r,
            Err(Error::DenominatorIndistinguishableFromZero { .. })
        ));
    }
}
