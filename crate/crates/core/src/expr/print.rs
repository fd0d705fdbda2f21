//! Plain-text rendering that the expression parser reads back.

use std::cmp::Ordering;
use std::fmt::{self, Write};

use num_traits::{One, Signed};

use super::poly::{Monomial, Poly};
use super::symbol::Symbol;
use super::Expr;
use crate::Rational;

/// Display order: higher degree first, then phase-space classes before
/// coordinates before constants and parameters, and lower indices first within
/// a class. Prints `2*u2 + x1` and `eps1 - eps2`.
fn display_cmp(a: &Monomial, b: &Monomial) -> Ordering {
    b.degree().cmp(&a.degree()).then_with(|| {
        let key = |m: &Monomial| {
            let mut v: Vec<(Symbol, u32)> = m.vars().to_vec();
            v.sort_by(|x, y| y.0.rank().cmp(&x.0.rank()).then_with(|| x.0.cmp(&y.0)));
            v
        };
        let (ka, kb) = (key(a), key(b));
        for (x, y) in ka.iter().zip(kb.iter()) {
            let c = y.0.rank().cmp(&x.0.rank()).then_with(|| x.0.cmp(&y.0)).then(y.1.cmp(&x.1));
            if c != Ordering::Equal {
                return c;
            }
        }
        kb.len().cmp(&ka.len())
    })
}

fn write_monomial(out: &mut String, m: &Monomial) {
    let mut first = true;
    for (s, e) in m.vars().iter().rev() {
        if !first {
            out.push('*');
        }
        first = false;
        let name = s.name();
        let atomic = !name.contains(['+', '-', ' ']) || name.starts_with("sqrt(");
        if atomic {
            out.push_str(name);
        } else {
            let _ = write!(out, "({name})");
        }
        if *e > 1 {
            let _ = write!(out, "^{e}");
        }
    }
}

fn write_rational(out: &mut String, c: &Rational) {
    if c.is_integer() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "({}/{})", c.numer(), c.denom());
    }
}

/// Terms in display order; shared with the constraint normaliser so that the
/// sign convention matches what gets printed.
pub(crate) fn display_terms(p: &Poly) -> Vec<&(Monomial, Rational)> {
    let mut terms: Vec<&(Monomial, Rational)> = p.terms().iter().collect();
    terms.sort_by(|a, b| display_cmp(&a.0, &b.0));
    terms
}

pub(crate) fn poly_to_string(p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in display_terms(p).into_iter().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if m.is_one() {
            if a.is_integer() {
                let _ = write!(out, "{}", a.numer());
            } else {
                let _ = write!(out, "{}/{}", a.numer(), a.denom());
            }
            continue;
        }
        if !a.is_one() {
            write_rational(&mut out, &a);
            out.push('*');
        }
        write_monomial(&mut out, m);
    }
    out
}

fn is_single_atom(p: &Poly) -> bool {
    matches!(p.terms(), [(m, c)] if c.is_one() && m.vars().len() == 1)
}

impl fmt::Display for Poly<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&poly_to_string(self))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut s = String::new();
        write_monomial(&mut s, self);
        f.write_str(&s)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = poly_to_string(self.numerator());
        let den = self.denominator_factors();
        if den.is_empty() {
            return f.write_str(&num);
        }
        let num = if self.numerator().len() > 1 { format!("({num})") } else { num };
        let parts: Vec<String> = den
            .iter()
            .map(|(p, e)| {
                let mut s = poly_to_string(p);
                if p.len() > 1 {
                    s = format!("({s})");
                }
                if *e > 1 {
                    s = format!("{s}^{e}");
                }
                s
            })
            .collect();
        if den.len() == 1 && den[0].1 == 1 && is_single_atom(&den[0].0) {
            write!(f, "{num}/{}", parts[0])
        } else {
            write!(f, "{num}/({})", parts.join("*"))
        }
    }
}
