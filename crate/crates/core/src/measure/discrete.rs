//! Finitely supported measures with exact rational masses.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactreal::rational::format_rational;
use crate::exactreal::Rational;

/// A subprobability measure on finitely many points; missing mass is divergence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure<P: Ord> {
    support: BTreeMap<P, Rational>,
}

impl<P: Ord + Clone> DiscreteMeasure<P> {
    pub fn zero() -> Self {
        DiscreteMeasure {
            support: BTreeMap::new(),
        }
    }

    /// Builds from `(point, mass)` pairs, adding masses of repeated points.
    pub fn new<I: IntoIterator<Item = (P, Rational)>>(items: I) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (p, m) in items {
            if m < Rational::zero() {
                return Err(Error::Mass(format!(
                    "negative mass {}",
                    format_rational(&m)
                )));
            }
            if m.is_zero() {
                continue;
            }
            *support.entry(p).or_insert_with(Rational::zero) += m;
        }
        let mu = DiscreteMeasure { support };
        let total = mu.total_mass();
        if total > Rational::one() {
            return Err(Error::Mass(format!(
                "total mass {} exceeds 1",
                format_rational(&total)
            )));
        }
        Ok(mu)
    }

    pub fn mass(&self, p: &P) -> Rational {
        self.support.get(p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mass_where<F: Fn(&P) -> bool>(&self, pred: F) -> Rational {
        self.support
            .iter()
            .filter(|(p, _)| pred(p))
            .map(|(_, m)| m)
            .sum()
    }

    pub fn total_mass(&self) -> Rational {
        self.support.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, &Rational)> {
        self.support.iter()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Pushforward along `g`.
    pub fn map<Q: Ord + Clone, G: Fn(&P) -> Q>(&self, g: G) -> DiscreteMeasure<Q> {
        let mut support = BTreeMap::new();
        for (p, m) in &self.support {
            *support.entry(g(p)).or_insert_with(Rational::zero) += m;
        }
        DiscreteMeasure { support }
    }

    /// Restriction to the points satisfying `pred`, renormalised to total mass 1.
    pub fn condition<F: Fn(&P) -> bool>(&self, pred: F) -> Result<Self> {
        let z = self.mass_where(&pred);
        if z.is_zero() {
            return Err(Error::Mass("conditioning on a null event".into()));
        }
        DiscreteMeasure::new(
            self.support
                .iter()
                .filter(|(p, _)| pred(p))
                .map(|(p, m)| (p.clone(), m / &z)),
        )
    }
}

/// The point mass at `x`.
pub fn val_ret<P: Ord + Clone>(x: P) -> DiscreteMeasure<P> {
    DiscreteMeasure {
        support: BTreeMap::from([(x, Rational::one())]),
    }
}

/// The mixture `sum_x mu(x) f(x)`.
pub fn val_bind<P, Q, F>(mu: &DiscreteMeasure<P>, f: F) -> Result<DiscreteMeasure<Q>>
where
    P: Ord + Clone,
    Q: Ord + Clone,
    F: Fn(&P) -> Result<DiscreteMeasure<Q>>,
{
    let mut items = Vec::new();
    for (x, m) in mu.iter() {
        for (y, w) in f(x)?.iter() {
            items.push((y.clone(), m * w));
        }
    }
    DiscreteMeasure::new(items)
}

/// The geometric recursion unrolled `depth` times: `{k -> 2^-k : 1 <= k <= depth}`.
pub fn geometric_truncation(depth: u32) -> DiscreteMeasure<u64> {
    fn go(depth: u32) -> DiscreteMeasure<u64> {
        if depth == 0 {
            return DiscreteMeasure::zero();
        }
        let half = Rational::new(1.into(), 2.into());
        let coin = DiscreteMeasure::new([(true, half.clone()), (false, half)]).expect("fair coin");
        val_bind(&coin, |b| {
            if *b {
                Ok(val_ret(1))
            } else {
                val_bind(&go(depth - 1), |n| Ok(val_ret(n + 1)))
            }
        })
        .expect("masses stay below 1")
    }
    go(depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::rat;

    #[test]
    fn rejects_excess_mass() {
        assert!(DiscreteMeasure::new([(0u8, rat(2, 3)), (1, rat(1, 2))]).is_err());
        assert!(DiscreteMeasure::new([(0u8, rat(-1, 3))]).is_err());
    }

    #[test]
    fn left_identity_and_coin() {
        let f = |x: &u32| DiscreteMeasure::new([(*x, rat(1, 3)), (x + 1, rat(1, 3))]);
        assert_eq!(val_bind(&val_ret(4u32), f).unwrap(), f(&4).unwrap());
        let coin = DiscreteMeasure::new([(0u32, rat(1, 2)), (1, rat(1, 2))]).unwrap();
        let c = DiscreteMeasure::new([(9u32, rat(3, 4))]).unwrap();
        assert_eq!(val_bind(&coin, |_| Ok(c.clone())).unwrap(), c);
    }

    #[test]
    fn geometric_truncation_masses() {
        let g = geometric_truncation(6);
        for k in 1..=6u64 {
            assert_eq!(g.mass(&k), Rational::new(1.into(), (1i64 << k).into()));
        }
        assert_eq!(g.total_mass(), rat(63, 64));
    }
}
