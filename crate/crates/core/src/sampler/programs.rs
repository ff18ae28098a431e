//! Small sampler programs exercising laziness and commutativity.

use super::monad::{bind, ret, Sampler};
use super::prims::{bot_samp, bot_samp_bot, normal, std_bernoulli, std_uniform};
use crate::exactreal::{ops, CReal};
use crate::lazy::{LazyBool, Thunk};

/// Binds a divergent sampler and ignores the draw; diverges anyway.
pub fn always_div() -> Sampler<CReal> {
    bind(&bot_samp(), |_: CReal| Ok(std_uniform()))
}

/// Binds a sampler of divergent values and ignores the draw; behaves as `std_uniform`.
pub fn never_div() -> Sampler<CReal> {
    bind(&bot_samp_bot(), |_: CReal| Ok(std_uniform()))
}

/// On heads, a sample that diverges when forced; otherwise a fair coin.
pub fn maybe_bot() -> Sampler<LazyBool> {
    bind(&std_bernoulli(), |b: LazyBool| {
        if b.force()? {
            Ok(ret(Thunk::bottom()))
        } else {
            Ok(std_bernoulli())
        }
    })
}

/// On heads, a divergent sampler; otherwise a fair coin.
pub fn maybe_bot_prime() -> Sampler<LazyBool> {
    bind(&std_bernoulli(), |b: LazyBool| {
        if b.force()? {
            Ok(Sampler::bottom())
        } else {
            Ok(std_bernoulli())
        }
    })
}

/// `x ~ N(-1, 1)`, then `y ~ N(1, 1)`, returning `x + y`.
pub fn my_normal() -> Sampler<CReal> {
    bind(
        &normal(&CReal::from_int(-1), &CReal::from_int(1)),
        |x: CReal| {
            Ok(bind(
                &normal(&CReal::from_int(1), &CReal::from_int(1)),
                move |y: CReal| Ok(ret(ops::add(&x, &y))),
            ))
        },
    )
}

/// [`my_normal`] with the two draws swapped.
pub fn my_normal_prime() -> Sampler<CReal> {
    bind(
        &normal(&CReal::from_int(1), &CReal::from_int(1)),
        |y: CReal| {
            Ok(bind(
                &normal(&CReal::from_int(-1), &CReal::from_int(1)),
                move |x: CReal| Ok(ret(ops::add(&x, &y))),
            ))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::BitTape;

    #[test]
    fn maybe_bot_levels() {
        let heads = BitTape::from_bit_str("1").unwrap();
        let v = maybe_bot()
            .run(&heads)
            .expect("value-level divergence only");
        assert!(v.force().is_err());
        assert!(maybe_bot_prime().run(&heads).is_err());

        let tails = BitTape::from_bit_str("01").unwrap();
        assert!(maybe_bot().run(&tails).unwrap().force().unwrap());
        assert!(maybe_bot_prime().run(&tails).unwrap().force().unwrap());
    }
}
