//! The global environment Ξ of real constants, real operations and primitive distributions.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::eval::{LazyValue, Value};
use super::syntax::{wf_dist, Type};
use crate::error::{DivergeReason, Error, Result};
use crate::exactreal::ops::{self, Comparison};
use crate::exactreal::CReal;
use crate::lazy::{Deferred, LazyNat, Thunk};
use crate::sampler::{self, Fuel, Sampler};

type OpFn = dyn Fn(&[CReal]) -> Value + Send + Sync;

/// An `n`-ary operation taking `real^n` (a right-nested product) to `real`,
/// or to `nat` for semi-decided comparisons.
#[derive(Clone)]
pub struct RealOp {
    pub arity: usize,
    pub ty: Type,
    f: Arc<OpFn>,
}

impl RealOp {
    pub fn apply(&self, args: &[CReal]) -> Value {
        (self.f)(args)
    }
}

impl fmt::Debug for RealOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealOp({}, {})", self.arity, self.ty)
    }
}

#[derive(Clone, Debug)]
pub struct PrimDist {
    /// The payload type `τ` of `dist τ`.
    pub payload: Type,
    pub sampler: Sampler<LazyValue>,
}

#[derive(Clone, Debug, Default)]
pub struct GlobalEnv {
    reals: BTreeMap<String, CReal>,
    ops: BTreeMap<String, RealOp>,
    dists: BTreeMap<String, PrimDist>,
}

impl GlobalEnv {
    pub fn empty() -> Self {
        Self::default()
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        let ident = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && name
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '\'');
        if !ident || name == "O" {
            return Err(Error::Registration(format!(
                "`{name}` is not a usable identifier"
            )));
        }
        if self.reals.contains_key(name)
            || self.ops.contains_key(name)
            || self.dists.contains_key(name)
        {
            return Err(Error::Registration(format!(
                "`{name}` is already registered"
            )));
        }
        Ok(())
    }

    pub fn register_real(&mut self, name: &str, x: CReal) -> Result<()> {
        self.check_fresh(name)?;
        self.reals.insert(name.into(), x);
        Ok(())
    }

    /// Registers an operation of declared type `ty`, which must be
    /// `real^arity -> real` or `real^arity -> nat`.
    pub fn register_op<F>(&mut self, name: &str, ty: Type, arity: usize, f: F) -> Result<()>
    where
        F: Fn(&[CReal]) -> Value + Send + Sync + 'static,
    {
        self.check_fresh(name)?;
        let Some(domain) = Type::real_power(arity) else {
            return Err(Error::Registration(format!(
                "`{name}`: operations need arity at least 1"
            )));
        };
        let ok = matches!(&ty, Type::Arrow(a, b) if **a == domain && matches!(**b, Type::Real | Type::Nat));
        if !ok {
            return Err(Error::Registration(format!(
                "`{name}`: type {ty} does not match arity {arity}"
            )));
        }
        self.ops.insert(
            name.into(),
            RealOp {
                arity,
                ty,
                f: Arc::new(f),
            },
        );
        Ok(())
    }

    pub fn register_dist(
        &mut self,
        name: &str,
        payload: Type,
        sampler: Sampler<LazyValue>,
    ) -> Result<()> {
        self.check_fresh(name)?;
        if !wf_dist(&payload) {
            return Err(Error::Registration(format!(
                "`{name}`: dist {payload} is not well formed"
            )));
        }
        self.dists
            .insert(name.into(), PrimDist { payload, sampler });
        Ok(())
    }

    pub fn real(&self, name: &str) -> Option<&CReal> {
        self.reals.get(name)
    }

    pub fn op(&self, name: &str) -> Option<&RealOp> {
        self.ops.get(name)
    }

    pub fn dist(&self, name: &str) -> Option<&PrimDist> {
        self.dists.get(name)
    }

    pub fn is_real_prim(&self, name: &str) -> bool {
        self.reals.contains_key(name) || self.ops.contains_key(name)
    }

    pub fn is_dist(&self, name: &str) -> bool {
        self.dists.contains_key(name)
    }

    /// The type of a real constant or operation.
    pub fn real_prim_type(&self, name: &str) -> Option<Type> {
        if self.reals.contains_key(name) {
            return Some(Type::Real);
        }
        self.ops.get(name).map(|op| op.ty.clone())
    }

    pub fn dist_names(&self) -> impl Iterator<Item = &str> {
        self.dists.keys().map(String::as_str)
    }

    pub fn real_prim_names(&self) -> impl Iterator<Item = &str> {
        self.reals.keys().chain(self.ops.keys()).map(String::as_str)
    }
}

fn real_value(s: Sampler<CReal>) -> Sampler<LazyValue> {
    s.map(|x| Thunk::ready(Value::Real(x)))
}

fn nat_value(s: Sampler<LazyNat>) -> Sampler<LazyValue> {
    s.map(|n| Thunk::ready(Value::Nat(n)))
}

pub fn default_global_env() -> GlobalEnv {
    default_global_env_with(Fuel::default())
}

/// Registers `pi`, the real operations `add sub mul div neg sqrt log exp`,
/// the comparison `lt : real * real -> nat` (1 when the first argument is
/// smaller) and the primitive distributions of the sampler library.
pub fn default_global_env_with(fuel: Fuel) -> GlobalEnv {
    let mut g = GlobalEnv::empty();
    let r = Type::Real;
    let r2 = Type::prod(Type::Real, Type::Real);
    let c = fuel.comparison;
    let real = |f: fn(&CReal, &CReal) -> CReal| move |a: &[CReal]| Value::Real(f(&a[0], &a[1]));
    let steps: Vec<Result<()>> = vec![
        g.register_real("pi", ops::pi()),
        g.register_op("add", Type::arrow(r2.clone(), r.clone()), 2, real(ops::add)),
        g.register_op("sub", Type::arrow(r2.clone(), r.clone()), 2, real(ops::sub)),
        g.register_op("mul", Type::arrow(r2.clone(), r.clone()), 2, real(ops::mul)),
        g.register_op("div", Type::arrow(r2.clone(), r.clone()), 2, real(ops::div)),
        g.register_op("neg", Type::arrow(r.clone(), r.clone()), 1, |a| {
            Value::Real(ops::neg(&a[0]))
        }),
        g.register_op("sqrt", Type::arrow(r.clone(), r.clone()), 1, move |a| {
            Value::Real(ops::sqrt_with(&a[0], c))
        }),
        g.register_op("log", Type::arrow(r.clone(), r.clone()), 1, move |a| {
            Value::Real(ops::log_with(&a[0], c))
        }),
        g.register_op("exp", Type::arrow(r.clone(), r.clone()), 1, |a| {
            Value::Real(ops::exp(&a[0]))
        }),
        g.register_op("lt", Type::arrow(r2, Type::Nat), 2, move |a| {
            let (x, y) = (a[0].clone(), a[1].clone());
            Value::Nat(LazyNat::defer(Thunk::new(move || {
                match ops::lt_semi(&x, &y, c)? {
                    Comparison::Less => Ok(LazyNat::new(1)),
                    Comparison::Greater => Ok(LazyNat::new(0)),
                    Comparison::Undecided => Err(Error::diverged(DivergeReason::Comparison)),
                }
            })))
        }),
        g.register_dist("stdUniform", Type::Real, real_value(sampler::std_uniform())),
        g.register_dist(
            "stdBernoulli",
            Type::Nat,
            sampler::std_bernoulli().map(|b| {
                Thunk::ready(Value::Nat(LazyNat::defer(
                    b.map(|b| Ok(LazyNat::new(u64::from(b)))),
                )))
            }),
        ),
        g.register_dist(
            "stdGeometric",
            Type::Nat,
            nat_value(sampler::std_geometric_with(fuel)),
        ),
        g.register_dist(
            "stdNormal",
            Type::Real,
            real_value(sampler::std_normal_with(fuel)),
        ),
        g.register_dist("cantor", Type::Real, real_value(sampler::cantor())),
        g.register_dist("botSamp", Type::Real, real_value(sampler::bot_samp())),
        g.register_dist(
            "botSampBot",
            Type::Real,
            real_value(sampler::bot_samp_bot()),
        ),
    ];
    for s in steps {
        s.expect("default registrations are well formed");
    }
    g
}
