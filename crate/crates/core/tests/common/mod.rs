//! Random expression strategies and algebraic laws shared by the property
//! suite and the acceptance harness.
#![allow(dead_code)]

use std::sync::OnceLock;

use dirac_core::brackets::{poisson, BracketContext};
use dirac_core::corpus::load;
use dirac_core::expr::Ideal;
use dirac_core::model::Model;
use dirac_core::parser::parse_expr;
use dirac_core::{canonical, lagrangian, Expr, Options, Symbol};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn scope() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| load("cawley").expect("bundled model parses"))
}

pub fn e(text: &str) -> Expr {
    parse_expr(text, scope()).unwrap_or_else(|err| panic!("{text}: {err}"))
}

pub fn sym(text: &str) -> Symbol {
    e(text).symbols().pop().expect("a single symbol")
}

const LEAVES: &[&str] = &["q1", "q2", "q3", "pq1", "pq2", "pq3", "eps1", "eps2~", "sqrt(pq1)"];
const PLAIN: &[&str] = &["q1", "q2", "pq2", "eps1"];

fn leaf(names: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    prop_oneof![(-3i64..=3).prop_map(Expr::int), proptest::sample::select(names).prop_map(e)]
}

fn tree(names: &'static [&'static str]) -> impl Strategy<Value = Expr> {
    leaf(names).prop_recursive(3, 10, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a + &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a - &b),
            (inner.clone(), inner).prop_map(|(a, b)| &a * &b),
        ]
    })
}

/// Polynomials in phase-space variables, a parameter and a radical.
pub fn poly_expr() -> impl Strategy<Value = Expr> {
    tree(LEAVES)
}

/// Quotients with denominators that never vanish identically.
pub fn rat_expr() -> impl Strategy<Value = Expr> {
    (tree(LEAVES), tree(PLAIN)).prop_map(|(n, d)| n.checked_div(&(&(&d * &d) + &Expr::one())).expect("nonzero denominator"))
}

fn same(label: &str, x: &Expr, y: &Expr) -> Result<(), TestCaseError> {
    if x == y && (x - y).is_zero() {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!("{label}: {x} != {y}")))
    }
}

pub fn ring_laws(a: &Expr, b: &Expr, c: &Expr) -> Result<(), TestCaseError> {
    same("add assoc", &(&(a + b) + c), &(a + &(b + c)))?;
    same("add comm", &(a + b), &(b + a))?;
    same("mul assoc", &(&(a * b) * c), &(a * &(b * c)))?;
    same("mul comm", &(a * b), &(b * a))?;
    same("distributive", &(a * &(b + c)), &(&(a * b) + &(a * c)))?;
    same("zero", &(a + &Expr::zero()), a)?;
    same("one", &(a * &Expr::one()), a)?;
    same("inverse", &(a + &(-a)), &Expr::zero())?;
    same("negation", &(-&(-a)), a)
}

pub fn derivation_laws(a: &Expr, b: &Expr) -> Result<(), TestCaseError> {
    for x in ["q2", "pq1", "eps1"] {
        let x = sym(x);
        same("sum rule", &(a + b).diff(&x), &(&a.diff(&x) + &b.diff(&x)))?;
        same("product rule", &(a * b).diff(&x), &(&(&a.diff(&x) * b) + &(a * &b.diff(&x))))?;
    }
    Ok(())
}

pub fn jacobi(f: &Expr, g: &Expr, h: &Expr) -> Result<(), TestCaseError> {
    let m = scope();
    let s = &(&poisson(f, &poisson(g, h, m), m) + &poisson(g, &poisson(h, f, m), m)) + &poisson(h, &poisson(f, g, m), m);
    same("jacobi", &s, &Expr::zero())
}

pub fn poisson_laws(f: &Expr, g: &Expr, h: &Expr) -> Result<(), TestCaseError> {
    let m = scope();
    same("antisymmetry", &poisson(f, g, m), &(-&poisson(g, f, m)))?;
    same("bilinearity", &poisson(&(f + g), h, m), &(&poisson(f, h, m) + &poisson(g, h, m)))?;
    same("leibniz", &poisson(&(f * g), h, m), &(&(f * &poisson(g, h, m)) + &(g * &poisson(f, h, m))))
}

pub fn m_bracket_symmetry(f: &Expr, g: &Expr) -> Result<(), TestCaseError> {
    let m = scope();
    let opts = Options::default();
    let la = lagrangian::analyze(m, &opts).expect("lagrangian stage");
    let can = canonical::analyze(m, &la, &opts).expect("canonical stage");
    let ctx = BracketContext::new(m, &la, &can);
    same("m symmetry", &ctx.m_bracket(f, g), &ctx.m_bracket(g, f))
}

pub fn round_trip(a: &Expr) -> Result<(), TestCaseError> {
    let back = parse_expr(&a.to_string(), scope()).map_err(|err| TestCaseError::fail(format!("{a}: {err}")))?;
    same("round trip", &back, a)
}

/// Reduction is idempotent, linear and kills ideal members.
pub fn reduction_laws(a: &Expr, b: &Expr, k: &Expr) -> Result<(), TestCaseError> {
    let gens = [e("q2"), e("pq1"), e("pq3")];
    let ideal = Ideal::new(&gens, 12);
    let red = |x: &Expr| ideal.reduce(x).map_err(|err| TestCaseError::fail(err.to_string()));
    let ra = red(a)?;
    same("idempotent", &red(&ra)?, &ra)?;
    same("linear", &red(&(a + b))?, &(&ra + &red(b)?))?;
    for g in &gens {
        same("member", &red(&(a + &(k * g)))?, &ra)?;
    }
    Ok(())
}
