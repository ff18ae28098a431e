//! Bit tapes with read tracking.
//!
//! A tape is a view `n -> offset + n * 2^shift` onto a shared source. Even/odd
//! splitting only changes the view, so every split of a tape shares the same
//! read record and the set of source indices touched is exactly the modulus
//! of the computation that ran on it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

type BitFn = dyn Fn(&BigUint) -> bool + Send + Sync;

#[derive(Clone)]
pub enum TapeSource {
    /// An arbitrary infinite bit function.
    Function(Arc<BitFn>),
    /// Bits derived from `(seed, index)` by a counter-based mixer.
    Prng(u64),
    /// A finite word; reading past its end fails with `OutOfBits`.
    Prefix(Arc<Vec<bool>>),
}

impl fmt::Debug for TapeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSource::Function(_) => write!(f, "Function"),
            TapeSource::Prng(seed) => write!(f, "Prng({seed})"),
            TapeSource::Prefix(bits) => write!(f, "Prefix({} bits)", bits.len()),
        }
    }
}

struct Shared {
    source: TapeSource,
    reads: Mutex<BTreeSet<BigUint>>,
}

#[derive(Clone)]
pub struct BitTape {
    shared: Arc<Shared>,
    shift: u32,
    offset: BigUint,
}

impl fmt::Debug for BitTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BitTape")
            .field("source", &self.shared.source)
            .field("shift", &self.shift)
            .field("offset", &self.offset)
            .finish()
    }
}

impl BitTape {
    pub fn from_source(source: TapeSource) -> Self {
        BitTape {
            shared: Arc::new(Shared {
                source,
                reads: Mutex::new(BTreeSet::new()),
            }),
            shift: 0,
            offset: BigUint::zero(),
        }
    }

    pub fn prng(seed: u64) -> Self {
        Self::from_source(TapeSource::Prng(seed))
    }

    pub fn prefix(bits: Vec<bool>) -> Self {
        Self::from_source(TapeSource::Prefix(Arc::new(bits)))
    }

    /// The `k` low bits of `word`, bit `i` of the tape being bit `i` of `word`.
    pub fn from_word(word: u64, k: u32) -> Self {
        Self::prefix((0..k).map(|i| (word >> i) & 1 == 1).collect())
    }

    /// Parses a `0`/`1` string as a finite prefix tape.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidArgument(format!(
                    "tape literal contains {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::prefix(bits))
    }

    pub fn function<F>(f: F) -> Self
    where
        F: Fn(&BigUint) -> bool + Send + Sync + 'static,
    {
        Self::from_source(TapeSource::Function(Arc::new(f)))
    }

    pub fn constant(bit: bool) -> Self {
        Self::function(move |_| bit)
    }

    /// `0, 1, 0, 1, ...`
    pub fn alternating() -> Self {
        Self::function(|i| i.bit(0))
    }

    pub fn source(&self) -> &TapeSource {
        &self.shared.source
    }

    /// Index into the shared source for position `n` of this view.
    pub fn source_index(&self, n: u64) -> BigUint {
        (BigUint::from(n) << self.shift as usize) + &self.offset
    }

    pub fn read(&self, n: u64) -> Result<bool> {
        let index = self.source_index(n);
        let bit = match &self.shared.source {
            TapeSource::Function(f) => f(&index),
            TapeSource::Prng(seed) => prng_bit(*seed, &index),
            TapeSource::Prefix(bits) => match index.to_usize().filter(|i| *i < bits.len()) {
                Some(i) => bits[i],
                None => {
                    return Err(Error::OutOfBits {
                        index: index.to_string(),
                        len: bits.len(),
                    })
                }
            },
        };
        self.shared
            .reads
            .lock()
            .expect("read record poisoned")
            .insert(index);
        Ok(bit)
    }

    pub fn even(&self) -> BitTape {
        BitTape {
            shared: Arc::clone(&self.shared),
            shift: self.shift + 1,
            offset: self.offset.clone(),
        }
    }

    pub fn odd(&self) -> BitTape {
        let offset = &self.offset + (BigUint::from(1u8) << self.shift as usize);
        BitTape {
            shared: Arc::clone(&self.shared),
            shift: self.shift + 1,
            offset,
        }
    }

    pub fn split(&self) -> (BitTape, BitTape) {
        (self.even(), self.odd())
    }

    /// Every source index read so far through any view of this tape.
    pub fn reads(&self) -> BTreeSet<BigUint> {
        self.shared
            .reads
            .lock()
            .expect("read record poisoned")
            .clone()
    }

    pub fn bits_read(&self) -> usize {
        self.shared
            .reads
            .lock()
            .expect("read record poisoned")
            .len()
    }

    /// A fresh tape over the same source with an empty read record.
    pub fn fresh(&self) -> BitTape {
        BitTape::from_source(self.shared.source.clone())
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Bit `index` of the seeded stream: a pure function of `(seed, index)`.
fn prng_bit(seed: u64, index: &BigUint) -> bool {
    let block = index >> 6usize;
    let lane = index.iter_u64_digits().next().unwrap_or(0) & 63;
    let mut h = splitmix64(seed ^ 0xD1B5_4A32_D192_ED03);
    for limb in block.iter_u64_digits() {
        h = splitmix64(h ^ limb);
    }
    h = splitmix64(h);
    (h >> lane) & 1 == 1
}
