//! The dyadic rationals as the dense subset of the reals.

use num_bigint::BigInt;
use num_traits::Signed;

use super::creal::CReal;
use super::rational::Rational;

/// A countable dense subset with a computable metric on it.
pub struct DenseEnum {
    enumerate: fn() -> Box<dyn Iterator<Item = Rational> + Send>,
    metric: fn(&Rational, &Rational) -> CReal,
}

impl DenseEnum {
    pub fn iter(&self) -> Box<dyn Iterator<Item = Rational> + Send> {
        (self.enumerate)()
    }

    /// The `index`-th element of the enumeration.
    pub fn nth(&self, index: usize) -> Rational {
        self.iter().nth(index).expect("enumeration is infinite")
    }

    pub fn metric(&self, a: &Rational, b: &Rational) -> CReal {
        (self.metric)(a, b)
    }
}

/// `0`, then for `n = 1, 2, ...` every `m / 2^n` with `|m| <= n 2^n` such that
/// `m` is odd or `|m| > (n-1) 2^n`, in increasing `m`.
pub fn dyadic_enum() -> DenseEnum {
    DenseEnum {
        enumerate: || Box::new(DyadicIter::new()),
        metric: |a, b| CReal::from_rational((a - b).abs()),
    }
}

struct DyadicIter {
    started: bool,
    level: u32,
    m: BigInt,
}

impl DyadicIter {
    fn new() -> Self {
        DyadicIter {
            started: false,
            level: 0,
            m: BigInt::from(0),
        }
    }

    fn scale(&self) -> BigInt {
        BigInt::from(1) << self.level as usize
    }

    fn enter_level(&mut self, level: u32) {
        self.level = level;
        self.m = -(self.scale() * BigInt::from(level));
    }
}

impl Iterator for DyadicIter {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        if !self.started {
            self.started = true;
            self.enter_level(1);
            return Some(Rational::from_integer(BigInt::from(0)));
        }
        loop {
            let scale = self.scale();
            let n = BigInt::from(self.level);
            if self.m > &scale * &n {
                let next = self.level + 1;
                self.enter_level(next);
                continue;
            }
            let m = self.m.clone();
            self.m += 1;
            let odd = (&m % BigInt::from(2)) != BigInt::from(0);
            let bound: BigInt = &scale * (&n - BigInt::from(1));
            let outer = m.magnitude() > bound.magnitude();
            if odd || outer {
                return Some(Rational::new(m, scale));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::rational::{int, rat};
    use num_traits::Zero;
    use std::collections::HashSet;

    #[test]
    fn first_five() {
        let got: Vec<_> = dyadic_enum().iter().take(5).collect();
        assert_eq!(got, vec![int(0), int(-1), rat(-1, 2), rat(1, 2), int(1)]);
    }

    #[test]
    fn no_duplicates_in_first_thousand() {
        let seen: HashSet<_> = dyadic_enum().iter().take(1000).collect();
        assert_eq!(seen.len(), 1000);
    }

    #[test]
    fn metric_on_diagonal_is_zero() {
        let e = dyadic_enum();
        let q = rat(3, 8);
        let d = e.metric(&q, &q);
        for n in 0..10 {
            assert!(d.approx(n).unwrap().is_zero());
        }
        assert_eq!(e.metric(&int(-1), &rat(1, 2)).approx(0).unwrap(), rat(3, 2));
        assert_eq!(e.nth(3), rat(1, 2));
    }
}
