//! Model-file DSL and inline expression parsing.
//!
//! ```text
//! model "cawley"
//! coords q1 q2 q3
//! lagrangian u1*u2 - (1/2)*q3*q2^2
//! ```
//!
//! Further directives: `dim D`, `vector x1 x2`, `velocities u1 u2`,
//! `const kappa nonzero`, `assume e1 nonzero`, `usolution u1 = ..., u2 = ...`,
//! `max_order K` and `dtr L.I name [weight]`. `#` starts a comment.

mod expr;
mod lexer;

use std::collections::HashMap;

pub use expr::{dot, Allow, Value};
pub use lexer::{lex, Tok, Token};

use crate::expr::{Assumptions, Expr, Property, Symbol};
use crate::model::{Binding, DtrSpec, Model, VectorDecl, DEFAULT_DIM, DEFAULT_MAX_ORDER};
use crate::{Error, Result};

use expr::{parse_scalar, parse_value, Ctx};

/// Parses an expression against the symbols of `scope`. Parameters, unknowns
/// and free functions are accepted by spelling.
pub fn parse_expr(text: &str, scope: &Model) -> Result<Expr> {
    parse_expr_with(text, scope, Allow::Query)
}

pub fn parse_expr_with(text: &str, scope: &Model, allow: Allow) -> Result<Expr> {
    let params: Vec<String> = scope.dtr.iter().map(|d| d.name.clone()).collect();
    let ctx = Ctx { scope: &scope.scope, allow, params: &params, line: 1, col0: 0 };
    parse_scalar(text, &ctx)
}

/// Parses a scalar or vector expression.
pub fn parse_value_in(text: &str, scope: &Model) -> Result<Value> {
    let params: Vec<String> = scope.dtr.iter().map(|d| d.name.clone()).collect();
    let ctx = Ctx { scope: &scope.scope, allow: Allow::Query, params: &params, line: 1, col0: 0 };
    parse_value(text, &ctx)
}

struct Line<'a> {
    no: usize,
    keyword: &'a str,
    rest: &'a str,
    /// Zero-based column where `rest` begins.
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line, col, msg: msg.into() }
}

fn split_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let lead = body.len() - trimmed.len();
        let (keyword, rest) = match trimmed.find(char::is_whitespace) {
            Some(k) => (&trimmed[..k], &trimmed[k..]),
            None => (trimmed, ""),
        };
        let rest_trim = rest.trim_start();
        let col = lead + keyword.len() + (rest.len() - rest_trim.len());
        out.push(Line { no: i + 1, keyword, rest: rest_trim.trim_end(), col });
    }
    out
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn velocity_name(coord: &str) -> String {
    match coord.strip_prefix('q') {
        Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => format!("u{d}"),
        _ => format!("u{coord}"),
    }
}

/// Splits on commas outside parentheses and brackets.
fn split_top_level(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

enum Decl {
    Scalars(Vec<String>),
    Vector(String),
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<Model> {
    let lines = split_lines(text);
    let mut name = String::from("unnamed");
    let mut dim = DEFAULT_DIM;
    let mut decls: Vec<(usize, Decl)> = Vec::new();
    let mut vel_names: Option<(usize, Vec<String>)> = None;
    let mut constants: Vec<(usize, String, Option<Property>)> = Vec::new();
    let mut assumes: Vec<(usize, String, Property)> = Vec::new();
    let mut lagrangian: Option<&Line> = None;
    let mut usolution: Option<&Line> = None;
    let mut max_order = DEFAULT_MAX_ORDER;
    let mut dtr_lines: Vec<&Line> = Vec::new();

    let property = |w: &str, l: &Line| match w {
        "nonzero" => Ok(Property::NonZero),
        "positive" => Ok(Property::Positive),
        other => Err(syntax(l.no, l.col + 1, format!("unknown property `{other}`"))),
    };

    for l in &lines {
        let words: Vec<&str> = l.rest.split_whitespace().collect();
        match l.keyword {
            "model" => name = l.rest.trim_matches('"').to_string(),
            "coords" => {
                if words.is_empty() {
                    return Err(syntax(l.no, l.col + 1, "`coords` needs at least one name"));
                }
                decls.push((l.no, Decl::Scalars(words.iter().map(|w| w.to_string()).collect())));
            }
            "vector" => {
                if words.is_empty() {
                    return Err(syntax(l.no, l.col + 1, "`vector` needs at least one name"));
                }
                for w in words {
                    decls.push((l.no, Decl::Vector(w.to_string())));
                }
            }
            "velocities" => vel_names = Some((l.no, words.iter().map(|w| w.to_string()).collect())),
            "dim" => {
                dim = l
                    .rest
                    .parse()
                    .ok()
                    .filter(|d| *d >= 1)
                    .ok_or_else(|| syntax(l.no, l.col + 1, "`dim` expects a positive integer"))?;
            }
            "const" => {
                let (names, prop) = match words.last() {
                    Some(&w) if w == "nonzero" || w == "positive" => (&words[..words.len() - 1], Some(property(w, l)?)),
                    _ => (&words[..], None),
                };
                if names.is_empty() {
                    return Err(syntax(l.no, l.col + 1, "`const` needs a name"));
                }
                for n in names {
                    constants.push((l.no, n.to_string(), prop));
                }
            }
            "assume" => {
                let [n, p] = words.as_slice() else {
                    return Err(syntax(l.no, l.col + 1, "`assume` expects a name and a property"));
                };
                assumes.push((l.no, n.to_string(), property(p, l)?));
            }
            "lagrangian" => lagrangian = Some(l),
            "usolution" => usolution = Some(l),
            "max_order" => {
                max_order = l
                    .rest
                    .parse()
                    .ok()
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| syntax(l.no, l.col + 1, "`max_order` expects an integer >= 1"))?;
            }
            "dtr" => dtr_lines.push(l),
            other => return Err(syntax(l.no, 1, format!("unknown directive `{other}`"))),
        }
    }

    let mut scope: HashMap<String, Binding> = HashMap::new();
    let declare = |scope: &mut HashMap<String, Binding>, line: usize, n: String, b: Binding| -> Result<()> {
        if !is_identifier(&n) {
            return Err(syntax(line, 1, format!("`{n}` is not a valid name")));
        }
        if scope.insert(n.clone(), b).is_some() {
            return Err(syntax(line, 1, format!("`{n}` declared twice")));
        }
        Ok(())
    };

    let (mut coords, mut velocities, mut momenta) = (Vec::new(), Vec::new(), Vec::new());
    let mut vectors = Vec::new();
    let mut scalar_positions = Vec::new();
    for (line, d) in &decls {
        match d {
            Decl::Scalars(ns) => {
                for n in ns {
                    let a = coords.len() + 1;
                    scalar_positions.push((*line, coords.len(), n.clone()));
                    coords.push(Symbol::coord(n, a));
                    momenta.push(Symbol::momentum(&format!("p{n}"), a));
                    velocities.push(Symbol::velocity(&velocity_name(n), a));
                }
            }
            Decl::Vector(n) => {
                let mut comps = Vec::new();
                for mu in 0..dim {
                    let a = coords.len() + 1;
                    comps.push(coords.len());
                    coords.push(Symbol::coord(&format!("{n}[{mu}]"), a));
                    momenta.push(Symbol::momentum(&format!("p{n}[{mu}]"), a));
                    velocities.push(Symbol::velocity(&format!("u{n}[{mu}]"), a));
                }
                vectors.push(VectorDecl { name: n.clone(), components: comps });
            }
        }
    }
    if coords.is_empty() {
        return Err(syntax(1, 1, "no coordinates declared"));
    }
    if let Some((line, names)) = vel_names {
        if names.len() != scalar_positions.len() {
            return Err(Error::ArityMismatch(format!(
                "line {line}: {} velocity names for {} scalar coordinates",
                names.len(),
                scalar_positions.len()
            )));
        }
        for ((_, pos, _), v) in scalar_positions.iter().zip(names) {
            velocities[*pos] = Symbol::velocity(&v, pos + 1);
        }
    }
    for (line, pos, n) in &scalar_positions {
        declare(&mut scope, *line, n.clone(), Binding::Scalar(coords[*pos].clone()))?;
        declare(&mut scope, *line, momenta[*pos].name().to_string(), Binding::Scalar(momenta[*pos].clone()))?;
        declare(&mut scope, *line, velocities[*pos].name().to_string(), Binding::Scalar(velocities[*pos].clone()))?;
    }
    for (v, (line, _)) in vectors.iter().zip(decls.iter().filter(|d| matches!(d.1, Decl::Vector(_)))) {
        let pick = |list: &Vec<Symbol>| v.components.iter().map(|&i| list[i].clone()).collect::<Vec<_>>();
        declare(&mut scope, *line, v.name.clone(), Binding::Vector(pick(&coords)))?;
        declare(&mut scope, *line, format!("p{}", v.name), Binding::Vector(pick(&momenta)))?;
        declare(&mut scope, *line, format!("u{}", v.name), Binding::Vector(pick(&velocities)))?;
    }

    let mut assumptions = Assumptions::new();
    let mut consts = Vec::new();
    for (line, n, prop) in constants {
        let s = Symbol::constant(&n);
        declare(&mut scope, line, n, Binding::Scalar(s.clone()))?;
        if let Some(p) = prop {
            assumptions.insert(s.clone(), p);
        }
        consts.push(s);
    }
    for (line, n, p) in assumes {
        match scope.get(&n) {
            Some(Binding::Scalar(s)) if s.is_coord() || consts.contains(s) => assumptions.insert(s.clone(), p),
            Some(_) => {
                return Err(syntax(line, 1, format!("assumptions apply to constants and coordinates only, not `{n}`")))
            }
            None => return Err(Error::UndeclaredSymbol(n)),
        }
    }

    let Some(ll) = lagrangian else {
        return Err(syntax(lines.last().map_or(1, |l| l.no + 1), 1, "missing `lagrangian` line"));
    };
    let no_params: Vec<String> = Vec::new();
    let lctx = Ctx { scope: &scope, allow: Allow::Lagrangian, params: &no_params, line: ll.no, col0: ll.col };
    let lag = parse_scalar(ll.rest, &lctx)?;

    let mut dtr = Vec::new();
    for l in dtr_lines {
        let mut it = l.rest.splitn(3, char::is_whitespace);
        let slot = it.next().unwrap_or("");
        let pname = it.next().unwrap_or("");
        let weight_text = it.next().map(str::trim).filter(|w| !w.is_empty());
        let (lv, pos) = slot
            .split_once('.')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .filter(|(_, p)| *p >= 1)
            .ok_or_else(|| syntax(l.no, l.col + 1, "`dtr` expects LEVEL.INDEX NAME [WEIGHT]"))?;
        if !is_identifier(pname) {
            return Err(syntax(l.no, l.col + 1, "`dtr` expects a parameter name"));
        }
        let weight = match weight_text {
            Some(w) => {
                let col = l.col + l.rest.find(w).unwrap_or(0);
                let ctx = Ctx { scope: &scope, allow: Allow::Query, params: &no_params, line: l.no, col0: col };
                Some(parse_scalar(w, &ctx)?)
            }
            None => None,
        };
        dtr.push(DtrSpec { level: lv, position: pos, name: pname.to_string(), weight });
    }

    let usol = match usolution {
        None => None,
        Some(l) => {
            let mut values: Vec<Option<Expr>> = vec![None; coords.len()];
            let params: Vec<String> = Vec::new();
            for (off, part) in split_top_level(l.rest) {
                let Some((lhs, rhs)) = part.split_once('=') else {
                    return Err(syntax(l.no, l.col + off + 1, "expected `velocity = expression`"));
                };
                let lhs = lhs.trim();
                let pos = velocities
                    .iter()
                    .position(|v| v.name() == lhs)
                    .ok_or_else(|| Error::UndeclaredSymbol(lhs.to_string()))?;
                let col = l.col + off + part.find('=').unwrap_or(0) + 1;
                let ctx = Ctx { scope: &scope, allow: Allow::Solution, params: &params, line: l.no, col0: col };
                values[pos] = Some(parse_scalar(rhs, &ctx)?);
            }
            let given = values.iter().filter(|v| v.is_some()).count();
            if given != coords.len() {
                return Err(Error::ArityMismatch(format!(
                    "usolution gives {given} of {} velocities",
                    coords.len()
                )));
            }
            Some(values.into_iter().map(|v| v.expect("checked")).collect())
        }
    };

    Ok(Model {
        name,
        dim,
        coords,
        velocities,
        momenta,
        vectors,
        lagrangian: lag,
        constants: consts,
        assumptions,
        usolution: usol,
        max_chain_order: max_order,
        dtr,
        scope,
    })
}
