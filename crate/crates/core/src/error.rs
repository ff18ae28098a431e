use std::fmt;

use thiserror::Error;

/// Why a computation was cut off. Every refinement loop in the crate is bounded
/// by fuel, and running out of it is how divergence becomes observable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DivergeReason {
    /// A sampler that is itself bottom (no sampler was ever produced).
    BottomSampler,
    /// A value whose every approximation diverges.
    BottomValue,
    /// Recursion depth (fix unrolling, rejection rounds, geometric trials) exhausted.
    Recursion,
    /// A semi-decision (comparison, sign certification) never separated.
    Comparison,
    /// Some other named loop ran out of fuel.
    Other(String),
}

impl fmt::Display for DivergeReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BottomSampler => write!(f, "bottom sampler"),
            Self::BottomValue => write!(f, "bottom value"),
            Self::Recursion => write!(f, "recursion fuel exhausted"),
            Self::Comparison => write!(f, "comparison fuel exhausted"),
            Self::Other(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("diverged: {0}")]
    Diverged(DivergeReason),
    #[error("out of bits: index {index} of a {len}-bit prefix tape")]
    OutOfBits { index: String, len: usize },
    #[error("fast Cauchy violation at n={n}: |x_n - x_(n+1)| = {gap} > 2^-{n}")]
    FastCauchyViolation { n: u32, gap: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("total mass {0} exceeds 1")]
    Mass(String),
    #[error("denominator interval [{lo}, {hi}] contains zero")]
    DenominatorIndistinguishableFromZero { lo: String, hi: String },
    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("type error ({rule}): {msg}")]
    Type { rule: &'static str, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("ill-formed distribution type: dist {0}")]
    IllFormedDistType(String),
    #[error("stuck term: {0}")]
    StuckTerm(String),
    #[error("registration error: {0}")]
    Registration(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn diverged(reason: DivergeReason) -> Self {
        Error::Diverged(reason)
    }

    /// Divergence and tape exhaustion are the two "no answer yet" outcomes;
    /// everything else is a genuine failure.
    pub fn is_partial(&self) -> bool {
        matches!(self, Error::Diverged(_) | Error::OutOfBits { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
