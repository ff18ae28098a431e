//! λCD: PCF with products, reals and a distribution monad.
//!
//! Programs are parsed against a [`GlobalEnv`], checked by [`typecheck`] and
//! evaluated call-by-name; a term of type `dist τ` evaluates to a sampler
//! built from the same monad as the library primitives.

pub mod check;
pub mod env;
pub mod eval;
pub mod parse;
pub mod syntax;

use crate::condition::Center;
use crate::error::{Error, Result};
use crate::exactreal::{Interval, Rational};
use crate::lazy::{LazyNat, Thunk};
use crate::measure::{Located, Observe};
use crate::sampler::report::{Render, Rendered};
use crate::sampler::{BitTape, Fuel, Sampler};

pub use check::{infer, typecheck};
pub use env::{default_global_env, default_global_env_with, GlobalEnv, PrimDist, RealOp};
pub use eval::{eval, eval_closed, Env, LazyValue, Value};
pub use parse::{parse_decimal, parse_type, parse_with};
pub use syntax::{wf_dist, Name, Term, Type};

/// Parses against the default global environment.
pub fn parse(src: &str) -> Result<Term> {
    parse_with(src, &default_global_env())
}

/// A typechecked program of type `dist τ`, evaluated to its sampler.
#[derive(Clone, Debug)]
pub struct Program {
    pub term: Term,
    pub payload: Type,
    pub sampler: Sampler<LazyValue>,
}

/// Parses, checks and evaluates a distribution-typed program.
/// Divergence while evaluating the term itself yields a bottom sampler.
pub fn compile(src: &str, genv: &GlobalEnv, fuel: Fuel) -> Result<Program> {
    let term = parse_with(src, genv)?;
    compile_term(term, genv, fuel)
}

pub fn compile_term(term: Term, genv: &GlobalEnv, fuel: Fuel) -> Result<Program> {
    let payload = match typecheck(genv, &term)? {
        Type::Dist(t) => *t,
        other => {
            return Err(Error::Type {
                rule: "program",
                msg: format!("expected a distribution, found {other}"),
            })
        }
    };
    let sampler = match eval_closed(genv, &term, fuel) {
        Ok(v) => v.into_dist()?,
        Err(e) if e.is_partial() => Sampler::bottom_with(e),
        Err(e) => return Err(e),
    };
    Ok(Program {
        term,
        payload,
        sampler,
    })
}

/// Runs a distribution-typed term on `tape` and renders the sample.
pub fn run_dist(
    term: &Term,
    genv: &GlobalEnv,
    tape: &BitTape,
    precision: u32,
    fuel: Fuel,
) -> Result<Rendered> {
    let prog = compile_term(term.clone(), genv, fuel)?;
    let v = prog.sampler.run(tape)?;
    let (value, radius) = v.render(precision)?;
    Ok(Rendered {
        value,
        radius,
        bits_read: tape.bits_read(),
    })
}

fn flatten_reals(v: &Value, precision: u32, out: &mut Vec<Interval>) -> Result<bool> {
    match v {
        Value::Real(x) => {
            out.push(x.enclosure(precision)?);
            Ok(true)
        }
        Value::Pair(a, b) => Ok(flatten_reals(&a.force()?, precision, out)?
            && flatten_reals(&b.force()?, precision, out)?),
        _ => Ok(false),
    }
}

impl Observe for LazyValue {
    fn locate(&self, precision: u32) -> Located {
        let v = match self.force() {
            Ok(v) => v,
            Err(e) => return Located::Failed(e),
        };
        if let Value::Nat(n) = &v {
            return Located::Nat(n.knowledge());
        }
        let mut coords = Vec::new();
        match flatten_reals(&v, precision, &mut coords) {
            Ok(true) => Located::Reals(coords),
            Ok(false) => Located::Failed(Error::InvalidArgument(format!(
                "cannot locate {v:?} in an open set"
            ))),
            Err(e) => Located::Failed(e),
        }
    }
}

impl Render for Value {
    fn render(&self, precision: u32) -> Result<(String, Option<String>)> {
        match self {
            Value::Nat(n) => n.render(precision),
            Value::Real(x) => x.render(precision),
            Value::Pair(a, b) => (a.force()?, b.force()?).render(precision),
            Value::Clos(_) | Value::Op(..) => Ok(("<function>".into(), None)),
            Value::Dist(_) => Ok(("<distribution>".into(), None)),
        }
    }
}

impl Render for LazyValue {
    fn render(&self, precision: u32) -> Result<(String, Option<String>)> {
        self.force()?.render(precision)
    }
}

fn center_value(v: &Value, n: u32) -> Result<(Value, Rational)> {
    match v {
        Value::Nat(k) => Ok((
            Value::Nat(LazyNat::new(k.force()?)),
            Rational::from_integer(0.into()),
        )),
        Value::Real(x) => {
            let (c, r) = x.center(n)?;
            Ok((Value::Real(c), r))
        }
        Value::Pair(a, b) => {
            let (ca, ra) = center_value(&a.force()?, n)?;
            let (cb, rb) = center_value(&b.force()?, n)?;
            Ok((Value::Pair(Thunk::ready(ca), Thunk::ready(cb)), ra.max(rb)))
        }
        other => Err(Error::InvalidArgument(format!(
            "no exact center for {other:?}"
        ))),
    }
}

impl Center for LazyValue {
    fn center(&self, n: u32) -> Result<(Self, Rational)> {
        let (v, r) = center_value(&self.force()?, n)?;
        Ok((Thunk::ready(v), r))
    }
}
