//! Precedence-climbing parser for scalar and vector expressions.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::lexer::{lex, Tok, Token};
use crate::expr::{Expr, Kind, Symbol};
use crate::model::Binding;
use crate::{Error, Rational, Result};

/// Which symbol classes an expression may mention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Allow {
    /// Coordinates, velocities and constants.
    Lagrangian,
    /// Coordinates, momenta, constants and free functions.
    Solution,
    /// Anything the engine prints, including parameters and unknowns.
    Query,
}

/// Parsed value: a scalar or a vector of components.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Expr),
    Vector(Vec<Expr>),
}

pub(crate) struct Ctx<'a> {
    pub scope: &'a HashMap<String, Binding>,
    pub allow: Allow,
    pub params: &'a [String],
    pub line: usize,
    pub col0: usize,
}

struct Parser<'a> {
    toks: Vec<Token>,
    at: usize,
    ctx: &'a Ctx<'a>,
}

/// Minkowski product with signature (-,+,...,+).
pub fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let p = x * y;
            if i == 0 {
                -p
            } else {
                p
            }
        })
        .sum()
}

pub(crate) fn parse_value(text: &str, ctx: &Ctx<'_>) -> Result<Value> {
    let toks = lex(text, ctx.line, ctx.col0)?;
    let mut p = Parser { toks, at: 0, ctx };
    let v = p.sum()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

pub(crate) fn parse_scalar(text: &str, ctx: &Ctx<'_>) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(Error::Syntax { line: ctx.line, col: ctx.col0 + 1, msg: "empty expression".into() });
    }
    match parse_value(text, ctx)? {
        Value::Scalar(e) => Ok(e),
        Value::Vector(_) => Err(Error::ArityMismatch("expected a scalar expression, found a vector".into())),
    }
}

fn mismatch(op: &str) -> Error {
    Error::ArityMismatch(format!("operator `{op}` applied to incompatible scalar/vector operands"))
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: &str) -> Error {
        Error::Syntax { line: self.ctx.line, col: self.ctx.col0 + self.toks[self.at].pos + 1, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == &t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<Value> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = add(acc, rhs, false)?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product()?;
                    acc = add(acc, rhs, true)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = mul(acc, rhs)?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = div(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(neg(self.unary()?))
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.postfix()?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.unary()?;
        let Value::Scalar(exp) = exp else {
            return Err(mismatch("^"));
        };
        let r = exp.to_rational().ok_or_else(|| self.error("exponent must be a rational constant"))?;
        pow(base, &r)
    }

    fn postfix(&mut self) -> Result<Value> {
        let v = self.atom()?;
        if self.peek() != &Tok::LBracket {
            return Ok(v);
        }
        self.bump();
        let Tok::Num(i) = self.bump() else {
            return Err(self.error("expected a component index"));
        };
        self.expect(Tok::RBracket, "`]`")?;
        match v {
            Value::Vector(cs) => {
                let i = i.to_usize().filter(|i| *i < cs.len()).ok_or_else(|| {
                    Error::ArityMismatch(format!("component index {i} out of range 0..{}", cs.len()))
                })?;
                Ok(Value::Scalar(cs[i].clone()))
            }
            Value::Scalar(_) => Err(Error::ArityMismatch("indexing a scalar".into())),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        match self.bump() {
            Tok::Num(n) => Ok(Value::Scalar(Expr::rational(Rational::from_integer(n)))),
            Tok::LParen => {
                let v = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) => {
                if self.peek() == &Tok::LParen {
                    return self.call(&name);
                }
                if name == "D" && self.peek() == &Tok::LBracket {
                    return self.partial();
                }
                self.resolve(&name)
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                Err(self.error("expected an expression"))
            }
        }
    }

    fn call(&mut self, name: &str) -> Result<Value> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.sum()?];
        while self.peek() == &Tok::Comma {
            self.bump();
            args.push(self.sum()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        match (name, args.as_slice()) {
            ("sqrt", [Value::Scalar(e)]) => Ok(Value::Scalar(e.sqrt()?)),
            ("dot", [Value::Vector(a), Value::Vector(b)]) if a.len() == b.len() => Ok(Value::Scalar(dot(a, b))),
            ("sqrt" | "dot", _) => Err(Error::ArityMismatch(format!("bad arguments to `{name}`"))),
            _ => Err(Error::UndeclaredSymbol(format!("{name}()"))),
        }
    }

    /// `D[theta1;q1,pq2]`, the printed form of an opaque partial derivative.
    fn partial(&mut self) -> Result<Value> {
        self.expect(Tok::LBracket, "`[`")?;
        let Tok::Ident(f) = self.bump() else {
            return Err(self.error("expected a free function name"));
        };
        let func = match self.resolve(&f)? {
            Value::Scalar(e) => e.symbols().into_iter().next().filter(|s| matches!(s.kind(), Kind::FreeFn(_))),
            Value::Vector(_) => None,
        }
        .ok_or_else(|| Error::UndeclaredSymbol(f.clone()))?;
        self.expect(Tok::Semi, "`;`")?;
        let mut wrt = Vec::new();
        loop {
            let v = self.postfix()?;
            let s = match v {
                Value::Scalar(e) => e.symbols().into_iter().next().filter(|s| s.is_coord() || s.is_momentum()),
                Value::Vector(_) => None,
            }
            .ok_or_else(|| self.error("partials are taken with respect to coordinates or momenta"))?;
            wrt.push(s);
            if self.peek() == &Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(Value::Scalar(Expr::sym(&Symbol::partial(&func, wrt))))
    }

    fn permitted(&self, s: &Symbol) -> bool {
        match self.ctx.allow {
            Allow::Query => true,
            Allow::Lagrangian => matches!(s.kind(), Kind::Coord(_) | Kind::Vel(_) | Kind::Constant),
            Allow::Solution => matches!(s.kind(), Kind::Coord(_) | Kind::Mom(_) | Kind::Constant | Kind::FreeFn(_)),
        }
    }

    fn resolve(&self, name: &str) -> Result<Value> {
        if let Some(b) = self.ctx.scope.get(name) {
            let v = match b {
                Binding::Scalar(s) => {
                    if !self.permitted(s) {
                        return Err(Error::UndeclaredSymbol(name.into()));
                    }
                    Value::Scalar(Expr::sym(s))
                }
                Binding::Vector(ss) => {
                    if !ss.iter().all(|s| self.permitted(s)) {
                        return Err(Error::UndeclaredSymbol(name.into()));
                    }
                    Value::Vector(ss.iter().map(Expr::sym).collect())
                }
            };
            return Ok(v);
        }
        let allow = self.ctx.allow;
        if allow != Allow::Lagrangian {
            if let Some(k) = name.strip_prefix("theta").filter(|k| k.chars().all(|c| c.is_ascii_digit())) {
                let idx = if k.is_empty() { 0 } else { k.parse().expect("digits") };
                return Ok(Value::Scalar(Expr::sym(&Symbol::free_fn(name, idx))));
            }
        }
        if allow == Allow::Query {
            if name == "tau" {
                return Ok(Value::Scalar(Expr::sym(&Symbol::time())));
            }
            if let Some(s) = time_function(name, self.ctx.params) {
                return Ok(Value::Scalar(Expr::sym(&s)));
            }
            if let Some(k) = name.strip_prefix('v').and_then(|k| k.parse::<usize>().ok()) {
                return Ok(Value::Scalar(Expr::sym(&Symbol::arbitrary(k))));
            }
        }
        Err(Error::UndeclaredSymbol(name.into()))
    }
}

/// Parameters, unknowns and auxiliaries are recognised by their spelling:
/// `Xi..` and `xi..` prefixes, declared generator names, `eps..`/`eta..`, or
/// any name carrying tilde marks.
fn time_function(name: &str, params: &[String]) -> Option<Symbol> {
    let base = name.trim_end_matches('~');
    let order = (name.len() - base.len()) as u32;
    let digits_after = |p: &str| base.strip_prefix(p).is_some_and(|r| r.chars().all(|c| c.is_ascii_digit()));
    if base.is_empty() {
        return None;
    }
    if digits_after("Xi") {
        return Some(Symbol::aux(base, order));
    }
    if digits_after("xi") {
        return Some(Symbol::unknown(base, order));
    }
    if digits_after("eps") || digits_after("eta") || params.iter().any(|p| p == base) || order > 0 {
        return Some(Symbol::param(base, order));
    }
    None
}

fn add(a: Value, b: Value, subtract: bool) -> Result<Value> {
    let op = |x: &Expr, y: &Expr| if subtract { x - y } else { x + y };
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(op(&x, &y))),
        (Value::Vector(x), Value::Vector(y)) if x.len() == y.len() => {
            Ok(Value::Vector(x.iter().zip(&y).map(|(p, q)| op(p, q)).collect()))
        }
        _ => Err(mismatch(if subtract { "-" } else { "+" })),
    }
}

fn mul(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
        (Value::Scalar(s), Value::Vector(v)) | (Value::Vector(v), Value::Scalar(s)) => {
            Ok(Value::Vector(v.iter().map(|c| &s * c).collect()))
        }
        (Value::Vector(x), Value::Vector(y)) if x.len() == y.len() => Ok(Value::Scalar(dot(&x, &y))),
        _ => Err(mismatch("*")),
    }
}

fn div(a: Value, b: Value) -> Result<Value> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.checked_div(&y)?)),
        (Value::Vector(v), Value::Scalar(s)) => {
            let inv = s.recip()?;
            Ok(Value::Vector(v.iter().map(|c| c * &inv).collect()))
        }
        _ => Err(mismatch("/")),
    }
}

fn neg(a: Value) -> Value {
    match a {
        Value::Scalar(x) => Value::Scalar(-x),
        Value::Vector(v) => Value::Vector(v.into_iter().map(|c| -c).collect()),
    }
}

fn pow(base: Value, r: &Rational) -> Result<Value> {
    let (p, q) = (
        r.numer().to_i64().ok_or_else(|| Error::ArityMismatch("exponent too large".into()))?,
        r.denom().to_i64().ok_or_else(|| Error::ArityMismatch("exponent too large".into()))?,
    );
    match base {
        Value::Scalar(x) => Ok(Value::Scalar(x.pow_rational(p, q)?)),
        Value::Vector(v) if p == 2 && q == 1 => Ok(Value::Scalar(dot(&v, &v))),
        Value::Vector(_) => Err(mismatch("^")),
    }
}
