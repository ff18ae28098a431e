//! Bounded densities for observations.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactreal::rational::{int, rat};
use crate::exactreal::{ops, CReal, Rational};

type DensFn<X> = dyn Fn(&X, &CReal) -> CReal + Send + Sync;

/// A density `p(y | x)` together with a global upper bound and a Lipschitz
/// constant in `x`.
pub struct BndDens<X> {
    pub dens: Arc<DensFn<X>>,
    pub bound: Rational,
    pub lipschitz: Rational,
    pub name: String,
}

impl<X> Clone for BndDens<X> {
    fn clone(&self) -> Self {
        BndDens {
            dens: Arc::clone(&self.dens),
            bound: self.bound.clone(),
            lipschitz: self.lipschitz.clone(),
            name: self.name.clone(),
        }
    }
}

impl<X> fmt::Debug for BndDens<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BndDens({}, bound {}, lipschitz {})",
            self.name, self.bound, self.lipschitz
        )
    }
}

impl<X> BndDens<X> {
    pub fn new<F>(
        name: impl Into<String>,
        dens: F,
        bound: Rational,
        lipschitz: Rational,
    ) -> Result<Self>
    where
        F: Fn(&X, &CReal) -> CReal + Send + Sync + 'static,
    {
        if !bound.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "density bound must be positive, got {bound}"
            )));
        }
        if lipschitz.is_negative() {
            return Err(Error::InvalidArgument(format!(
                "negative Lipschitz constant {lipschitz}"
            )));
        }
        Ok(BndDens {
            dens: Arc::new(dens),
            bound,
            lipschitz,
            name: name.into(),
        })
    }

    pub fn eval(&self, x: &X, y: &CReal) -> CReal {
        (self.dens)(x, y)
    }

    /// `(c dens, c bound)`, with the Lipschitz constant scaled to match.
    pub fn scaled(&self, c: &Rational) -> Result<Self>
    where
        X: 'static,
    {
        if !c.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        let (inner, k) = (Arc::clone(&self.dens), c.clone());
        Ok(BndDens {
            dens: Arc::new(move |x, y| ops::scale(&inner(x, y), &k)),
            bound: &self.bound * c,
            lipschitz: &self.lipschitz * c,
            name: format!("{}*{}", c, self.name),
        })
    }

    /// Replaces the bound by a larger one.
    pub fn with_bound(mut self, bound: Rational) -> Result<Self> {
        if bound < self.bound {
            return Err(Error::InvalidArgument(format!(
                "bound {bound} is below {}",
                self.bound
            )));
        }
        self.bound = bound;
        Ok(self)
    }
}

fn positive(name: &str, q: &Rational) -> Result<()> {
    if q.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive, got {q}"
        )))
    }
}

/// `exp(-(y-x)^2 / 2σ^2) / (σ sqrt(2π))`.
pub fn gaussian_noise(sigma: &Rational) -> Result<BndDens<CReal>> {
    positive("sigma", sigma)?;
    let s = CReal::from_rational(sigma.clone());
    let peak = ops::reciprocal(&ops::mul(&s, &ops::sqrt(&ops::scale(&ops::pi(), &int(2)))));
    let bound = peak.enclosure(40)?.hi().clone();
    // max |d/dx| = peak e^(-1/2) / σ, and e^(-1/2) < 61/100
    let lipschitz = &bound * rat(61, 100) / sigma;
    let two_var = int(2) * sigma * sigma;
    BndDens::new(
        format!("gaussian-noise({sigma})"),
        move |x: &CReal, y: &CReal| {
            let d = ops::sub(y, x);
            let e = ops::exp(&ops::scale(&ops::mul(&d, &d), &(-two_var.recip())));
            ops::mul(&peak, &e)
        },
        bound,
        lipschitz,
    )
}

/// `exp(-|y-x| / b) / 2b`.
pub fn laplace_noise(b: &Rational) -> Result<BndDens<CReal>> {
    positive("scale", b)?;
    let bound = (int(2) * b).recip();
    let lipschitz = &bound / b;
    let (peak, rate) = (bound.clone(), -b.recip());
    BndDens::new(
        format!("laplace-noise({b})"),
        move |x: &CReal, y: &CReal| {
            ops::scale(
                &ops::exp(&ops::scale(&ops::abs(&ops::sub(y, x)), &rate)),
                &peak,
            )
        },
        bound,
        lipschitz,
    )
}

/// The density that ignores both arguments.
pub fn constant<X: 'static>(c: &Rational) -> Result<BndDens<X>> {
    positive("constant density", c)?;
    let v = CReal::from_rational(c.clone());
    BndDens::new(
        format!("constant({c})"),
        move |_: &X, _: &CReal| v.clone(),
        c.clone(),
        Rational::zero(),
    )
}

/// Parses `gaussian-noise(σ)`, `laplace-noise(b)` or `constant(c)`.
pub fn parse_density(spec: &str) -> Result<BndDens<CReal>> {
    let spec = spec.trim();
    let bad = || Error::InvalidArgument(format!("unknown density `{spec}`"));
    let (name, rest) = spec.split_once('(').ok_or_else(bad)?;
    let arg = rest.strip_suffix(')').ok_or_else(bad)?;
    let q = crate::exactreal::parse_rational(arg.trim())?;
    match name.trim() {
        "gaussian-noise" => gaussian_noise(&q),
        "laplace-noise" => laplace_noise(&q),
        "constant" => constant(&q),
        _ => Err(bad()),
    }
}
