//! Call-by-name evaluation.
//!
//! Arguments, pair components and bound samples are memoized thunks, so each
//! is computed at most once and only when forced. `fix` unrolls lazily and
//! every unrolling spends one unit of recursion fuel.

use std::fmt;
use std::sync::Arc;

use super::env::{GlobalEnv, RealOp};
use super::syntax::{Name, Term, Type};
use crate::error::{DivergeReason, Error, Result};
use crate::exactreal::{CReal, Rational};
use crate::lazy::{Deferred, LazyNat, Thunk};
use crate::sampler::{bind, ret, Fuel, Sampler};

pub type LazyValue = Thunk<Value>;

#[derive(Clone)]
pub enum Value {
    Nat(LazyNat),
    Real(CReal),
    Clos(Closure),
    /// A real operation awaiting its tuple argument.
    Op(Name, RealOp),
    Pair(LazyValue, LazyValue),
    Dist(Sampler<LazyValue>),
}

#[derive(Clone)]
pub struct Closure {
    env: Env,
    param: Name,
    body: Arc<Node>,
    depth: u32,
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "NatV({n:?})"),
            Value::Real(x) => write!(f, "RealV({x:?})"),
            Value::Clos(c) => write!(f, "ClosV(\\{}. ..)", c.param),
            Value::Op(name, _) => write!(f, "ClosV({name})"),
            Value::Pair(..) => f.write_str("PairV(..)"),
            Value::Dist(s) => write!(f, "DistV({s:?})"),
        }
    }
}

fn stuck<T>(what: &str, v: &Value) -> Result<T> {
    Err(Error::StuckTerm(format!("expected {what}, found {v:?}")))
}

impl Value {
    pub fn into_nat(self) -> Result<LazyNat> {
        match self {
            Value::Nat(n) => Ok(n),
            v => stuck("a natural", &v),
        }
    }

    pub fn into_real(self) -> Result<CReal> {
        match self {
            Value::Real(x) => Ok(x),
            v => stuck("a real", &v),
        }
    }

    pub fn into_pair(self) -> Result<(LazyValue, LazyValue)> {
        match self {
            Value::Pair(a, b) => Ok((a, b)),
            v => stuck("a pair", &v),
        }
    }

    pub fn into_dist(self) -> Result<Sampler<LazyValue>> {
        match self {
            Value::Dist(s) => Ok(s),
            v => stuck("a distribution", &v),
        }
    }

    /// Whether the head constructor fits `ty`; components are not forced.
    pub fn has_shape(&self, ty: &Type) -> bool {
        matches!(
            (self, ty),
            (Value::Nat(_), Type::Nat)
                | (Value::Real(_), Type::Real)
                | (Value::Clos(_) | Value::Op(..), Type::Arrow(..))
                | (Value::Pair(..), Type::Prod(..))
                | (Value::Dist(_), Type::Dist(_))
        )
    }
}

/// `Term` with shared children, so closures and thunks can hold subterms cheaply.
enum Node {
    Zero,
    Succ(Arc<Node>),
    Pred(Arc<Node>),
    Ifz(Arc<Node>, Arc<Node>, Arc<Node>),
    Var(Name),
    Lam(Name, Arc<Node>),
    App(Arc<Node>, Arc<Node>),
    Fix(Arc<Node>),
    Pair(Arc<Node>, Arc<Node>),
    Fst(Arc<Node>),
    Snd(Arc<Node>),
    RealLit(Rational),
    RealPrim(Name),
    DistPrim(Name),
    Return(Arc<Node>),
    Bind(Name, Arc<Node>, Arc<Node>),
}

fn lower(t: &Term) -> Arc<Node> {
    Arc::new(match t {
        Term::Zero => Node::Zero,
        Term::Succ(m) => Node::Succ(lower(m)),
        Term::Pred(m) => Node::Pred(lower(m)),
        Term::Ifz(c, z, s) => Node::Ifz(lower(c), lower(z), lower(s)),
        Term::Var(x) => Node::Var(x.clone()),
        Term::Lam(x, _, b) => Node::Lam(x.clone(), lower(b)),
        Term::App(f, a) => Node::App(lower(f), lower(a)),
        Term::Fix(m) => Node::Fix(lower(m)),
        Term::Pair(a, b) => Node::Pair(lower(a), lower(b)),
        Term::Fst(m) => Node::Fst(lower(m)),
        Term::Snd(m) => Node::Snd(lower(m)),
        Term::RealLit(q) => Node::RealLit(q.clone()),
        Term::RealPrim(r) => Node::RealPrim(r.clone()),
        Term::DistPrim(d) => Node::DistPrim(d.clone()),
        Term::Return(m) => Node::Return(lower(m)),
        Term::Bind(x, m, n) => Node::Bind(x.clone(), lower(m), lower(n)),
    })
}

/// A persistent environment of call-by-name bindings.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<Frame>>);

struct Frame {
    name: Name,
    value: LazyValue,
    next: Env,
}

impl Env {
    pub fn extend(&self, name: Name, value: LazyValue) -> Env {
        Env(Some(Arc::new(Frame {
            name,
            value,
            next: self.clone(),
        })))
    }

    pub fn lookup(&self, name: &str) -> Option<&LazyValue> {
        let mut cur = self;
        while let Some(frame) = &cur.0 {
            if &*frame.name == name {
                return Some(&frame.value);
            }
            cur = &frame.next;
        }
        None
    }
}

#[derive(Clone)]
struct Cx(Arc<(GlobalEnv, Fuel)>);

impl Cx {
    fn genv(&self) -> &GlobalEnv {
        &self.0 .0
    }
}

fn delay(node: &Arc<Node>, env: &Env, cx: &Cx, depth: u32) -> LazyValue {
    let (node, env, cx) = (Arc::clone(node), env.clone(), cx.clone());
    Thunk::new(move || eval_node(&node, &env, &cx, depth))
}

/// Component `i` of a right-nested `n`-tuple, as a deferred real.
fn component(t: &LazyValue, i: usize, n: usize) -> CReal {
    if n == 1 {
        return CReal::deferred(t.map(|v| v.into_real()));
    }
    let part = if i == 0 {
        t.map(|v| v.into_pair()?.0.force())
    } else {
        t.map(|v| v.into_pair()?.1.force())
    };
    if i == 0 {
        CReal::deferred(part.map(|v| v.into_real()))
    } else {
        component(&part, i - 1, n - 1)
    }
}

fn apply(f: Value, arg: LazyValue, cx: &Cx) -> Result<Value> {
    match f {
        Value::Clos(c) => eval_node(&c.body, &c.env.extend(c.param, arg), cx, c.depth),
        Value::Op(_, op) => {
            let args: Vec<CReal> = (0..op.arity)
                .map(|i| component(&arg, i, op.arity))
                .collect();
            Ok(op.apply(&args))
        }
        v => stuck("a function", &v),
    }
}

fn eval_node(node: &Arc<Node>, env: &Env, cx: &Cx, depth: u32) -> Result<Value> {
    match &**node {
        Node::Zero => Ok(Value::Nat(LazyNat::new(0))),
        Node::Succ(m) => {
            let inner = delay(m, env, cx, depth).map(|v| v.into_nat());
            Ok(Value::Nat(LazyNat::defer(inner).succ()))
        }
        Node::Pred(m) => {
            let n = eval_node(m, env, cx, depth)?.into_nat()?.force()?;
            Ok(Value::Nat(LazyNat::new(n.saturating_sub(1))))
        }
        Node::Ifz(c, z, s) => {
            let n = eval_node(c, env, cx, depth)?.into_nat()?.force()?;
            eval_node(if n == 0 { z } else { s }, env, cx, depth)
        }
        Node::Var(x) => match env.lookup(x) {
            Some(v) => v.force(),
            None => Err(Error::UnboundVariable(x.to_string())),
        },
        Node::Lam(x, body) => Ok(Value::Clos(Closure {
            env: env.clone(),
            param: x.clone(),
            body: Arc::clone(body),
            depth,
        })),
        Node::App(f, a) => apply(eval_node(f, env, cx, depth)?, delay(a, env, cx, depth), cx),
        Node::Fix(m) => {
            if depth == 0 {
                return Err(Error::diverged(DivergeReason::Recursion));
            }
            let f = eval_node(m, env, cx, depth - 1)?;
            apply(f, delay(node, env, cx, depth - 1), cx)
        }
        Node::Pair(a, b) => Ok(Value::Pair(
            delay(a, env, cx, depth),
            delay(b, env, cx, depth),
        )),
        Node::Fst(m) => eval_node(m, env, cx, depth)?.into_pair()?.0.force(),
        Node::Snd(m) => eval_node(m, env, cx, depth)?.into_pair()?.1.force(),
        Node::RealLit(q) => Ok(Value::Real(CReal::from_rational(q.clone()))),
        Node::RealPrim(r) => {
            if let Some(x) = cx.genv().real(r) {
                Ok(Value::Real(x.clone()))
            } else if let Some(op) = cx.genv().op(r) {
                Ok(Value::Op(r.clone(), op.clone()))
            } else {
                Err(Error::StuckTerm(format!("unknown real primitive `{r}`")))
            }
        }
        Node::DistPrim(d) => match cx.genv().dist(d) {
            Some(p) => Ok(Value::Dist(p.sampler.clone())),
            None => Err(Error::StuckTerm(format!("unknown distribution `{d}`"))),
        },
        Node::Return(m) => Ok(Value::Dist(ret(delay(m, env, cx, depth)))),
        Node::Bind(x, m, n) => {
            let first = eval_node(m, env, cx, depth)?.into_dist()?;
            let (x, n, env, cx) = (x.clone(), Arc::clone(n), env.clone(), cx.clone());
            Ok(Value::Dist(bind(&first, move |v: LazyValue| {
                eval_node(&n, &env.extend(x.clone(), v), &cx, depth)?.into_dist()
            })))
        }
    }
}

/// Evaluates `t` to weak head normal form under `env`.
pub fn eval(env: &Env, genv: &GlobalEnv, t: &Term, fuel: Fuel) -> Result<Value> {
    let cx = Cx(Arc::new((genv.clone(), fuel)));
    eval_node(&lower(t), env, &cx, fuel.recursion)
}

pub fn eval_closed(genv: &GlobalEnv, t: &Term, fuel: Fuel) -> Result<Value> {
    eval(&Env::default(), genv, t, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{default_global_env, parse};

    fn run(src: &str) -> Result<Value> {
        eval_closed(&default_global_env(), &parse(src)?, Fuel::default())
    }

    #[test]
    fn pcf_basics() {
        let v = run("ifz O then succ O else pred O").unwrap();
        assert_eq!(v.into_nat().unwrap().force().unwrap(), 1);
        let v = run("fst (pred (succ (succ O)), 0.5)").unwrap();
        assert_eq!(v.into_nat().unwrap().force().unwrap(), 1);
        assert_eq!(
            run("pred O").unwrap().into_nat().unwrap().force().unwrap(),
            0
        );
    }

    #[test]
    fn fix_without_progress_diverges() {
        assert!(matches!(
            run("fix (\\g:nat. g)"),
            Err(Error::Diverged(DivergeReason::Recursion))
        ));
    }

    #[test]
    fn recursion_on_naturals() {
        let src =
            "fix (\\f:nat->nat->nat. \\a:nat. \\b:nat. ifz a then b else f (pred a) (succ b)) \
                   (succ (succ (succ O))) (succ O)";
        assert_eq!(run(src).unwrap().into_nat().unwrap().force().unwrap(), 4);
    }

    #[test]
    fn arguments_are_not_evaluated_eagerly() {
        let v = run("(\\x:real. 0.5) (fix (\\y:real. y))").unwrap();
        assert_eq!(
            v.into_real().unwrap().approx(3).unwrap(),
            Rational::new(1.into(), 2.into())
        );
        let v = run("succ (fix (\\n:nat. n))").unwrap();
        assert!(matches!(v, Value::Nat(_)));
    }

    #[test]
    fn ops_are_lazy_in_their_arguments() {
        let v = run("add (fix (\\y:real. y), 1)").unwrap();
        assert!(v.into_real().unwrap().approx(0).is_err());
        let v = run("mul (pi, 2)").unwrap().into_real().unwrap();
        let q = v.approx(20).unwrap();
        assert!((crate::exactreal::rational::to_f64(&q) - std::f64::consts::TAU).abs() < 1e-5);
    }

    #[test]
    fn comparisons_yield_naturals() {
        assert_eq!(
            run("lt (0.5, pi)")
                .unwrap()
                .into_nat()
                .unwrap()
                .force()
                .unwrap(),
            1
        );
        assert_eq!(
            run("lt (pi, 3)")
                .unwrap()
                .into_nat()
                .unwrap()
                .force()
                .unwrap(),
            0
        );
    }
}
