//! Concrete syntax.
//!
//! ```text
//! e ::= \x:T. e | ifz e then e else e | let x <- e in e | app
//! app ::= operand operand*
//! operand ::= (succ | pred | fix | fst | snd | return) operand | atom
//! atom ::= O | decimal | ident | (e) | (e, e)
//! T ::= U -> T | U * ... | dist U | nat | real | (T)
//! ```
//! `--` starts a line comment. Identifiers not bound by a binder resolve to
//! the global environment.

use num_bigint::BigInt;
use num_traits::Num;

use super::env::GlobalEnv;
use super::syntax::{Name, Term, Type};
use crate::error::{Error, Result};
use crate::exactreal::Rational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Backslash,
    Colon,
    Dot,
    LParen,
    RParen,
    Comma,
    Arrow,
    LeftArrow,
    Star,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Backslash => "`\\`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LeftArrow => "`<-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "O", "succ", "pred", "ifz", "then", "else", "fix", "fst", "snd", "return", "let", "in", "nat",
    "real", "dist",
];

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let peek = chars.get(i + 1).copied();
        let mut width = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '-' if peek == Some('-') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '-' if peek == Some('>') => {
                width = 2;
                Some(Tok::Arrow)
            }
            '<' if peek == Some('-') => {
                width = 2;
                Some(Tok::LeftArrow)
            }
            '\\' | 'λ' => Some(Tok::Backslash),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '*' | '×' => Some(Tok::Star),
            c if c.is_ascii_digit() || (c == '-' && peek.is_some_and(|d| d.is_ascii_digit())) => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j + 1 < chars.len() && chars[j] == '.' && chars[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                width = j - i;
                Some(Tok::Number(chars[i..j].iter().collect()))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut j = i + 1;
                while j < chars.len()
                    && (chars[j].is_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
                {
                    j += 1;
                }
                width = j - i;
                Some(Tok::Ident(chars[i..j].iter().collect()))
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character `{other}`"),
                });
            }
        };
        if let Some(t) = tok {
            out.push((t, pos));
        }
        i += width;
        col += width;
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// Parses a decimal literal such as `-0.25` into an exact rational.
pub fn parse_decimal(s: &str) -> Option<Rational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty()
        || (body.contains('.') && frac.is_empty())
        || !whole.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let digits = BigInt::from_str_radix(&format!("{whole}{frac}"), 10).ok()?;
    let q = Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32));
    Some(if neg { -q } else { q })
}

struct Parser<'g> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    scope: Vec<Name>,
    genv: &'g GlobalEnv,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        let Pos { line, col } = self.pos();
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T> {
        self.fail(format!(
            "expected {wanted}, found {}",
            self.peek().describe()
        ))
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&t.describe())
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<()> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&format!("`{kw}`"))
        }
    }

    fn binder(&mut self) -> Result<Name> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s.as_str().into())
            }
            _ => self.unexpected("a variable name"),
        }
    }

    fn ty(&mut self) -> Result<Type> {
        let lhs = self.prod_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(Type::arrow(lhs, self.ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn prod_ty(&mut self) -> Result<Type> {
        let lhs = self.unary_ty()?;
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(Type::prod(lhs, self.prod_ty()?))
        } else {
            Ok(lhs)
        }
    }

    fn unary_ty(&mut self) -> Result<Type> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "nat" => {
                self.bump();
                Ok(Type::Nat)
            }
            Tok::Ident(s) if s == "real" => {
                self.bump();
                Ok(Type::Real)
            }
            Tok::Ident(s) if s == "dist" => {
                self.bump();
                Ok(Type::dist(self.unary_ty()?))
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.unexpected("a type"),
        }
    }

    fn expr(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Backslash => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Colon)?;
                let t = self.ty()?;
                self.expect(Tok::Dot)?;
                self.scope.push(x.clone());
                let body = self.expr();
                self.scope.pop();
                Ok(Term::Lam(x, t, Box::new(body?)))
            }
            Tok::Ident(s) if s == "ifz" => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let z = self.expr()?;
                self.expect_kw("else")?;
                let n = self.expr()?;
                Ok(Term::ifz(c, z, n))
            }
            Tok::Ident(s) if s == "let" => {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::LeftArrow)?;
                let m = self.expr()?;
                self.expect_kw("in")?;
                self.scope.push(x.clone());
                let n = self.expr();
                self.scope.pop();
                Ok(Term::Bind(x, Box::new(m), Box::new(n?)))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<Term> {
        let mut t = self.operand()?;
        while self.starts_operand() {
            t = Term::app(t, self.operand()?);
        }
        Ok(t)
    }

    fn prefix(&self) -> Option<fn(Term) -> Term> {
        let Tok::Ident(s) = self.peek() else {
            return None;
        };
        match s.as_str() {
            "succ" => Some(Term::succ),
            "pred" => Some(Term::pred),
            "fix" => Some(Term::fix),
            "fst" => Some(Term::fst),
            "snd" => Some(Term::snd),
            "return" => Some(Term::ret),
            _ => None,
        }
    }

    fn operand(&mut self) -> Result<Term> {
        match self.prefix() {
            Some(wrap) => {
                self.bump();
                Ok(wrap(self.operand()?))
            }
            None => self.atom(),
        }
    }

    fn starts_operand(&self) -> bool {
        self.prefix().is_some() || self.starts_atom()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::LParen | Tok::Number(_) => true,
            Tok::Ident(s) => s == "O" || !KEYWORDS.contains(&s.as_str()),
            _ => false,
        }
    }

    fn atom(&mut self) -> Result<Term> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "O" => {
                self.bump();
                Ok(Term::Zero)
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(self.resolve(&s))
            }
            Tok::Number(s) => match parse_decimal(&s) {
                Some(q) => {
                    self.bump();
                    Ok(Term::RealLit(q))
                }
                None => self.fail(format!("malformed number `{s}`")),
            },
            Tok::LParen => {
                self.bump();
                let a = self.expr()?;
                if *self.peek() == Tok::Comma {
                    self.bump();
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::pair(a, b))
                } else {
                    self.expect(Tok::RParen)?;
                    Ok(a)
                }
            }
            _ => self.unexpected("an expression"),
        }
    }

    fn resolve(&self, s: &str) -> Term {
        if self.scope.iter().any(|x| &**x == s) {
            Term::Var(s.into())
        } else if self.genv.is_real_prim(s) {
            Term::RealPrim(s.into())
        } else if self.genv.is_dist(s) {
            Term::DistPrim(s.into())
        } else {
            Term::Var(s.into())
        }
    }
}

/// Parses a program against `genv`, resolving free identifiers to its primitives.
pub fn parse_with(src: &str, genv: &GlobalEnv) -> Result<Term> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        scope: Vec::new(),
        genv,
    };
    let t = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(t)
}

/// Parses a type such as `dist (nat * real)`.
pub fn parse_type(src: &str) -> Result<Type> {
    let genv = GlobalEnv::empty();
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
        scope: Vec::new(),
        genv: &genv,
    };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.unexpected("end of input");
    }
    Ok(t)
}
