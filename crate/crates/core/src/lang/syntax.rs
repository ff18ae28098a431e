//! Abstract syntax of λCD.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactreal::{format_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Nat,
    Real,
    Arrow(Box<Type>, Box<Type>),
    Prod(Box<Type>, Box<Type>),
    Dist(Box<Type>),
}

impl Type {
    pub fn arrow(a: Type, b: Type) -> Type {
        Type::Arrow(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Box::new(a), Box::new(b))
    }

    pub fn dist(a: Type) -> Type {
        Type::Dist(Box::new(a))
    }

    /// `real^n` as a right-nested product; `None` for `n = 0`.
    pub fn real_power(n: usize) -> Option<Type> {
        (0..n)
            .map(|_| Type::Real)
            .reduce(|acc, t| Type::prod(t, acc))
    }
}

/// `⊢_D τ`: nat, real and products of such.
pub fn wf_dist(t: &Type) -> bool {
    match t {
        Type::Nat | Type::Real => true,
        Type::Prod(a, b) => wf_dist(a) && wf_dist(b),
        Type::Arrow(..) | Type::Dist(_) => false,
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Nat | Type::Real => write!(f, "{t}"),
                _ => write!(f, "({t})"),
            }
        }
        match self {
            Type::Nat => f.write_str("nat"),
            Type::Real => f.write_str("real"),
            Type::Arrow(a, b) => {
                match **a {
                    Type::Arrow(..) => atom(a, f)?,
                    _ => write!(f, "{a}")?,
                }
                write!(f, " -> {b}")
            }
            Type::Prod(a, b) => {
                match **a {
                    Type::Nat | Type::Real | Type::Dist(_) => write!(f, "{a}")?,
                    _ => atom(a, f)?,
                }
                f.write_str(" * ")?;
                match **b {
                    Type::Arrow(..) => atom(b, f),
                    _ => write!(f, "{b}"),
                }
            }
            Type::Dist(a) => {
                f.write_str("dist ")?;
                match **a {
                    Type::Nat | Type::Real | Type::Dist(_) => write!(f, "{a}"),
                    _ => atom(a, f),
                }
            }
        }
    }
}

pub type Name = Arc<str>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Zero,
    Succ(Box<Term>),
    Pred(Box<Term>),
    Ifz(Box<Term>, Box<Term>, Box<Term>),
    Var(Name),
    Lam(Name, Type, Box<Term>),
    App(Box<Term>, Box<Term>),
    Fix(Box<Term>),
    Pair(Box<Term>, Box<Term>),
    Fst(Box<Term>),
    Snd(Box<Term>),
    RealLit(Rational),
    /// A real constant or real operation from the global environment.
    RealPrim(Name),
    DistPrim(Name),
    Return(Box<Term>),
    Bind(Name, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.into())
    }

    pub fn lam(x: &str, t: Type, body: Term) -> Term {
        Term::Lam(x.into(), t, Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn succ(t: Term) -> Term {
        Term::Succ(Box::new(t))
    }

    pub fn pred(t: Term) -> Term {
        Term::Pred(Box::new(t))
    }

    pub fn ifz(c: Term, z: Term, s: Term) -> Term {
        Term::Ifz(Box::new(c), Box::new(z), Box::new(s))
    }

    pub fn fix(t: Term) -> Term {
        Term::Fix(Box::new(t))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Box::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Box::new(t))
    }

    pub fn ret(t: Term) -> Term {
        Term::Return(Box::new(t))
    }

    pub fn bind(x: &str, m: Term, n: Term) -> Term {
        Term::Bind(x.into(), Box::new(m), Box::new(n))
    }

    /// The numeral `succ^n O`.
    pub fn numeral(n: u64) -> Term {
        (0..n).fold(Term::Zero, |t, _| Term::succ(t))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atomic(t: &Term) -> bool {
            matches!(
                t,
                Term::Zero | Term::Var(_) | Term::RealPrim(_) | Term::DistPrim(_) | Term::Pair(..)
            ) || matches!(t, Term::RealLit(q) if !q.is_negative())
        }
        fn arg(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if atomic(t) {
                write!(f, "{t}")
            } else {
                write!(f, "({t})")
            }
        }
        match self {
            Term::Zero => f.write_str("O"),
            Term::Succ(t) => {
                f.write_str("succ ")?;
                arg(t, f)
            }
            Term::Pred(t) => {
                f.write_str("pred ")?;
                arg(t, f)
            }
            Term::Fix(t) => {
                f.write_str("fix ")?;
                arg(t, f)
            }
            Term::Fst(t) => {
                f.write_str("fst ")?;
                arg(t, f)
            }
            Term::Snd(t) => {
                f.write_str("snd ")?;
                arg(t, f)
            }
            Term::Return(t) => {
                f.write_str("return ")?;
                arg(t, f)
            }
            Term::Ifz(c, z, s) => write!(f, "ifz {c} then {z} else {s}"),
            Term::Var(x) | Term::RealPrim(x) | Term::DistPrim(x) => f.write_str(x),
            Term::Lam(x, t, b) => write!(f, "\\{x}:{t}. {b}"),
            Term::App(a, b) => {
                match **a {
                    Term::App(..) => write!(f, "{a}")?,
                    _ => arg(a, f)?,
                }
                f.write_str(" ")?;
                arg(b, f)
            }
            Term::Pair(a, b) => write!(f, "({a}, {b})"),
            Term::RealLit(q) => f.write_str(&format_decimal(q)),
            Term::Bind(x, m, n) => write!(f, "let {x} <- {m} in {n}"),
        }
    }
}

/// Exact decimal form when the denominator is `2^a 5^b`, otherwise `p/q`.
fn format_decimal(q: &Rational) -> String {
    let mut d = q.denom().clone();
    let mut twos = 0usize;
    let mut fives = 0usize;
    while d.is_even() {
        d /= 2;
        twos += 1;
    }
    while (&d % 5u32).is_zero() {
        d /= 5;
        fives += 1;
    }
    if !d.is_one() {
        return format_rational(q);
    }
    let digits = twos.max(fives);
    let n = (q * Rational::from_integer(BigInt::from(10u32).pow(digits as u32))).to_integer();
    let sign = if n.is_negative() { "-" } else { "" };
    let s = format!("{:0>width$}", n.abs().to_string(), width = digits + 1);
    let (whole, frac) = s.split_at(s.len() - digits);
    match frac.trim_end_matches('0') {
        "" => format!("{sign}{whole}"),
        frac => format!("{sign}{whole}.{frac}"),
    }
}
