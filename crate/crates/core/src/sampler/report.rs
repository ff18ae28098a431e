//! Rendering sampled values.

use serde::{Deserialize, Serialize};

use super::monad::Sampler;
use super::tape::BitTape;
use crate::error::Result;
use crate::exactreal::rational::format_rational;
use crate::exactreal::{enclosure_radius, CReal};
use crate::lazy::{LazyBool, LazyNat};

/// One sample as emitted on the wire.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub seed: u64,
    pub precision: u32,
    pub value: String,
    /// `2^(-n+1)` for reals; absent for exact discrete values.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub radius: Option<String>,
    pub bits_read: usize,
}

/// A sample rendered at some precision, with the number of tape bits consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub value: String,
    pub radius: Option<String>,
    pub bits_read: usize,
}

impl Rendered {
    pub fn into_record(self, seed: u64, precision: u32) -> SampleRecord {
        SampleRecord {
            seed,
            precision,
            value: self.value,
            radius: self.radius,
            bits_read: self.bits_read,
        }
    }
}

/// Values that can be printed to a requested precision.
pub trait Render {
    /// The printed value and, for approximations, the enclosure radius.
    fn render(&self, precision: u32) -> Result<(String, Option<String>)>;
}

impl Render for CReal {
    fn render(&self, precision: u32) -> Result<(String, Option<String>)> {
        let q = self.approx(precision)?;
        Ok((
            format_rational(&q),
            Some(format_rational(&enclosure_radius(precision))),
        ))
    }
}

impl Render for LazyNat {
    fn render(&self, _precision: u32) -> Result<(String, Option<String>)> {
        Ok((self.force()?.to_string(), None))
    }
}

impl Render for LazyBool {
    fn render(&self, _precision: u32) -> Result<(String, Option<String>)> {
        Ok((self.force()?.to_string(), None))
    }
}

impl<A: Render, B: Render> Render for (A, B) {
    fn render(&self, precision: u32) -> Result<(String, Option<String>)> {
        let (a, ra) = self.0.render(precision)?;
        let (b, rb) = self.1.render(precision)?;
        Ok((format!("({a}, {b})"), ra.or(rb)))
    }
}

/// Runs `s` on `tape` and renders the result at `precision`.
pub fn render_on<X>(s: &Sampler<X>, tape: &BitTape, precision: u32) -> Result<Rendered>
where
    X: Render + Clone + Send + Sync + 'static,
{
    let x = s.run(tape)?;
    let (value, radius) = x.render(precision)?;
    Ok(Rendered {
        value,
        radius,
        bits_read: tape.bits_read(),
    })
}

/// Runs `s` on the PRNG tape for `seed` and renders the result at `precision`.
pub fn sample_record<X>(s: &Sampler<X>, seed: u64, precision: u32) -> Result<SampleRecord>
where
    X: Render + Clone + Send + Sync + 'static,
{
    Ok(render_on(s, &BitTape::prng(seed), precision)?.into_record(seed, precision))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::std_uniform;

    #[test]
    fn record_shape() {
        let r = sample_record(&std_uniform(), 3, 4).unwrap();
        assert_eq!(r.bits_read, 5);
        assert_eq!(r.radius.as_deref(), Some("1/8"));
        let json = serde_json::to_value(&r).unwrap();
        for key in ["seed", "precision", "value", "radius", "bits_read"] {
            assert!(json.get(key).is_some(), "{key}");
        }
    }
}
