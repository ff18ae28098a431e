//! The typing judgement `Γ ⊢ M : τ`.

use super::env::GlobalEnv;
use super::syntax::{wf_dist, Name, Term, Type};
use crate::error::{Error, Result};

fn type_error<T>(rule: &'static str, msg: String) -> Result<T> {
    Err(Error::Type { rule, msg })
}

/// Every `dist τ` inside an annotation must satisfy `⊢_D τ`.
fn check_annotation(t: &Type) -> Result<()> {
    match t {
        Type::Nat | Type::Real => Ok(()),
        Type::Arrow(a, b) | Type::Prod(a, b) => {
            check_annotation(a)?;
            check_annotation(b)
        }
        Type::Dist(a) if wf_dist(a) => Ok(()),
        Type::Dist(a) => Err(Error::IllFormedDistType(a.to_string())),
    }
}

fn require_wf(t: &Type) -> Result<()> {
    if wf_dist(t) {
        Ok(())
    } else {
        Err(Error::IllFormedDistType(t.to_string()))
    }
}

struct Checker<'g> {
    ctx: Vec<(Name, Type)>,
    genv: &'g GlobalEnv,
}

impl Checker<'_> {
    fn under<T>(&mut self, x: &Name, t: Type, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.ctx.push((x.clone(), t));
        let r = f(self);
        self.ctx.pop();
        r
    }

    fn nat(&mut self, rule: &'static str, t: &Term) -> Result<()> {
        match self.infer(t)? {
            Type::Nat => Ok(()),
            other => type_error(rule, format!("expected nat, found {other} in `{t}`")),
        }
    }

    fn infer(&mut self, t: &Term) -> Result<Type> {
        match t {
            Term::Zero => Ok(Type::Nat),
            Term::Succ(m) => {
                self.nat("succ", m)?;
                Ok(Type::Nat)
            }
            Term::Pred(m) => {
                self.nat("pred", m)?;
                Ok(Type::Nat)
            }
            Term::Ifz(c, z, s) => {
                self.nat("ifz", c)?;
                let (tz, ts) = (self.infer(z)?, self.infer(s)?);
                if tz != ts {
                    return type_error("ifz", format!("branches have types {tz} and {ts}"));
                }
                Ok(tz)
            }
            Term::Var(x) => match self.ctx.iter().rev().find(|(y, _)| y == x) {
                Some((_, ty)) => Ok(ty.clone()),
                None => Err(Error::UnboundVariable(x.to_string())),
            },
            Term::Lam(x, ty, body) => {
                check_annotation(ty)?;
                let out = self.under(x, ty.clone(), |c| c.infer(body))?;
                Ok(Type::arrow(ty.clone(), out))
            }
            Term::App(f, a) => {
                let tf = self.infer(f)?;
                let ta = self.infer(a)?;
                match tf {
                    Type::Arrow(dom, cod) if *dom == ta => Ok(*cod),
                    Type::Arrow(dom, _) => {
                        type_error("app", format!("`{f}` expects {dom}, given {ta}"))
                    }
                    other => type_error(
                        "app",
                        format!("`{f}` has type {other}, not a function type"),
                    ),
                }
            }
            Term::Fix(m) => match self.infer(m)? {
                Type::Arrow(a, b) if a == b => Ok(*a),
                other => type_error("fix", format!("expected τ -> τ, found {other}")),
            },
            Term::Pair(a, b) => Ok(Type::prod(self.infer(a)?, self.infer(b)?)),
            Term::Fst(m) => match self.infer(m)? {
                Type::Prod(a, _) => Ok(*a),
                other => type_error("fst", format!("expected a product, found {other}")),
            },
            Term::Snd(m) => match self.infer(m)? {
                Type::Prod(_, b) => Ok(*b),
                other => type_error("snd", format!("expected a product, found {other}")),
            },
            Term::RealLit(_) => Ok(Type::Real),
            Term::RealPrim(r) => match self.genv.real_prim_type(r) {
                Some(ty) => Ok(ty),
                None => type_error(
                    "real-prim",
                    format!("`{r}` is not a registered real primitive"),
                ),
            },
            Term::DistPrim(d) => match self.genv.dist(d) {
                Some(p) => {
                    require_wf(&p.payload)?;
                    Ok(Type::dist(p.payload.clone()))
                }
                None => type_error(
                    "dist-prim",
                    format!("`{d}` is not a registered distribution"),
                ),
            },
            Term::Return(m) => {
                let ty = self.infer(m)?;
                require_wf(&ty)?;
                Ok(Type::dist(ty))
            }
            Term::Bind(x, m, n) => {
                let t1 = match self.infer(m)? {
                    Type::Dist(a) => *a,
                    other => {
                        return type_error(
                            "bind",
                            format!("`{m}` has type {other}, not a distribution"),
                        )
                    }
                };
                require_wf(&t1)?;
                let t2 = match self.under(x, t1, |c| c.infer(n))? {
                    Type::Dist(b) => *b,
                    other => {
                        return type_error(
                            "bind",
                            format!("`{n}` has type {other}, not a distribution"),
                        )
                    }
                };
                require_wf(&t2)?;
                Ok(Type::dist(t2))
            }
        }
    }
}

/// Infers the type of `t` in context `ctx` (later entries shadow earlier ones).
pub fn infer(ctx: &[(Name, Type)], genv: &GlobalEnv, t: &Term) -> Result<Type> {
    Checker {
        ctx: ctx.to_vec(),
        genv,
    }
    .infer(t)
}

pub fn typecheck(genv: &GlobalEnv, t: &Term) -> Result<Type> {
    infer(&[], genv, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::env::default_global_env;
    use crate::lang::parse::parse_with;

    fn ty(src: &str) -> Result<Type> {
        let g = default_global_env();
        typecheck(&g, &parse_with(src, &g)?)
    }

    #[test]
    fn examples() {
        assert_eq!(ty("return O").unwrap(), Type::dist(Type::Nat));
        let bad = ty("let x <- stdUniform in return (\\y:real. y)");
        assert!(matches!(bad, Err(Error::IllFormedDistType(_))), "{bad:?}");
        assert_eq!(
            ty("ifz O then stdUniform else stdUniform").unwrap(),
            Type::dist(Type::Real)
        );
        assert_eq!(ty("pi").unwrap(), Type::Real);
    }

    #[test]
    fn failures_name_the_rule() {
        assert!(matches!(
            ty("succ 0.5"),
            Err(Error::Type { rule: "succ", .. })
        ));
        assert!(matches!(
            ty("ifz O then O else 0.5"),
            Err(Error::Type { rule: "ifz", .. })
        ));
        assert!(matches!(ty("O O"), Err(Error::Type { rule: "app", .. })));
        assert!(matches!(
            ty("let x <- O in return x"),
            Err(Error::Type { rule: "bind", .. })
        ));
        assert!(matches!(
            ty("fix (\\x:nat. 0.5)"),
            Err(Error::Type { rule: "fix", .. })
        ));
        assert!(matches!(ty("y"), Err(Error::UnboundVariable(_))));
        assert!(matches!(
            ty("\\d:dist (nat -> nat). O"),
            Err(Error::IllFormedDistType(_))
        ));
    }

    #[test]
    fn ops_take_tuples() {
        assert_eq!(ty("add (pi, 1)").unwrap(), Type::Real);
        assert_eq!(ty("lt (0.5, pi)").unwrap(), Type::Nat);
        assert!(ty("add pi 1").is_err());
    }
}
