//! Exact expressions as normalised multivariate rational functions.
//!
//! An [`Expr`] is `num / den` where `num` is an expanded polynomial and `den` is
//! a sorted product of monic polynomial factors. Radicals are atomic symbols
//! whose powers are reduced against their defining relation, and denominators
//! are kept free of square roots by multiplying through with conjugates.

mod ideal;
mod poly;
mod print;
mod symbol;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use ideal::{divide, groebner_basis, Ideal, DEFAULT_DEGREE_CAP};
pub use poly::{Coeff, Monomial, Poly};
pub use symbol::{Kind, Symbol};

use crate::{Error, Rational, Result};

/// Normalised rational function with exact coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

/// Property attached to a symbol by an `assume` or `const` declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    NonZero,
    Positive,
}

/// A single assumption on a symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assumption {
    pub symbol: Symbol,
    pub property: Property,
}

/// Set of assumptions consulted when deciding that a factor cannot vanish.
#[derive(Clone, Debug, Default)]
pub struct Assumptions {
    items: Vec<Assumption>,
}

impl Assumptions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, symbol: Symbol, property: Property) {
        if !self.items.iter().any(|a| a.symbol == symbol && a.property == property) {
            self.items.push(Assumption { symbol, property });
        }
    }

    pub fn is_nonzero(&self, s: &Symbol) -> bool {
        self.items.iter().any(|a| &a.symbol == s)
    }

    pub fn is_positive(&self, s: &Symbol) -> bool {
        self.items.iter().any(|a| &a.symbol == s && a.property == Property::Positive)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assumption> {
        self.items.iter()
    }

    /// Nonzero constant times a monomial in symbols assumed nonzero.
    pub fn poly_is_nonzero(&self, p: &Poly) -> bool {
        match p.terms() {
            [(m, c)] => !c.is_zero() && m.vars().iter().all(|(s, _)| self.is_nonzero(s)),
            _ => false,
        }
    }

    /// Whether the expression provably does not vanish.
    pub fn expr_is_nonzero(&self, e: &Expr) -> bool {
        self.poly_is_nonzero(&e.num)
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Expr {
    pub fn zero() -> Expr {
        Expr { num: Poly::zero(), den: Vec::new() }
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::rational(int(n))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr { num: Poly::constant(r), den: Vec::new() }
    }

    pub fn frac(n: i64, d: i64) -> Expr {
        Expr::rational(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn sym(s: &Symbol) -> Expr {
        Expr { num: Poly::var(s.clone()), den: Vec::new() }
    }

    /// Polynomial expression; radical powers are reduced.
    pub fn from_poly(p: Poly) -> Expr {
        Expr { num: reduce_radicals(p), den: Vec::new() }
    }

    /// `num / den` for arbitrary polynomials.
    pub fn from_polys(num: Poly, den: Poly) -> Result<Expr> {
        Expr::from_poly(num).checked_div(&Expr::from_poly(den))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> Poly {
        self.den.iter().fold(Poly::one(), |acc, (f, e)| acc.mul(&f.pow(*e)))
    }

    pub fn numerator_expr(&self) -> Expr {
        Expr { num: self.num.clone(), den: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_empty() && self.num.is_constant()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Distinct symbols appearing anywhere, in increasing variable order.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.variables();
        for (f, _) in &self.den {
            v.extend(f.variables());
        }
        v.sort();
        v.dedup();
        v
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.num.contains(s) || self.den.iter().any(|(f, _)| f.contains(s))
    }

    pub fn contains_where(&self, pred: impl Fn(&Symbol) -> bool) -> bool {
        self.symbols().iter().any(pred)
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree()
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr> {
        Ok(self * &other.recip()?)
    }

    pub fn recip(&self) -> Result<Expr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Poly::one();
        for (f, e) in &self.den {
            num = num.mul(&f.pow(*e));
        }
        let mut den = Vec::new();
        let mut scale = Rational::one();
        insert_factor(&mut den, &mut num, &mut scale, self.num.clone(), 1);
        let num = num.scale(&scale.recip());
        Ok(cancel(reduce_radicals(num), den))
    }

    pub fn pow(&self, n: i64) -> Result<Expr> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        let n = n as u32;
        if n == 0 {
            return Ok(Expr::one());
        }
        let num = reduce_radicals(self.num.pow(n));
        let den = self.den.iter().map(|(f, e)| (f.clone(), e * n)).collect();
        Ok(Expr { num, den })
    }

    /// `self^(p/q)`; non-integral powers become atomic radical symbols.
    pub fn pow_rational(&self, p: i64, q: i64) -> Result<Expr> {
        if q <= 0 {
            return Err(Error::Inconclusive("non-positive root index".into()));
        }
        let g = num_integer::gcd(p, q);
        let (p, q) = (p / g, q / g);
        if q == 1 {
            return self.pow(p);
        }
        if self.is_zero() {
            return if p > 0 { Ok(Expr::zero()) } else { Err(Error::DivisionByZero) };
        }
        // a^(1/q) = (num * den^(q-1))^(1/q) / den
        let d = self.denominator();
        let inner = reduce_radicals(self.num.mul(&d.pow(q as u32 - 1)));
        let root = match inner.constant_value().and_then(|c| exact_root(&c, q as u32)) {
            Some(r) => Expr::rational(r),
            None => Expr::sym(&Symbol::radical(inner, q as u32)),
        };
        let base = root.checked_div(&Expr::from_poly(d))?;
        base.pow(p)
    }

    pub fn sqrt(&self) -> Result<Expr> {
        self.pow_rational(1, 2)
    }

    /// Partial derivative honouring the dependency rules of each symbol kind.
    pub fn diff(&self, x: &Symbol) -> Expr {
        let dnum = diff_poly(&self.num, x);
        if self.den.is_empty() {
            return dnum;
        }
        let inv = Expr { num: Poly::one(), den: self.den.clone() };
        let mut log_d = Expr::zero();
        for (f, e) in &self.den {
            let df = diff_poly(f, x);
            if df.is_zero() {
                continue;
            }
            let q = df
                .checked_div(&Expr::from_poly(f.clone()))
                .expect("denominator factor is nonzero");
            log_d = &log_d + &(&Expr::int(*e as i64) * &q);
        }
        let n = Expr { num: self.num.clone(), den: Vec::new() };
        &(&dnum * &inv) - &(&(&n * &inv) * &log_d)
    }

    /// Simultaneous substitution followed by normalisation.
    pub fn substitute(&self, map: &HashMap<Symbol, Expr>) -> Expr {
        if map.is_empty() || !self.symbols().iter().any(|s| map.contains_key(s) || depends_on_map(s, map)) {
            return self.clone();
        }
        let mut cache: HashMap<Symbol, Expr> = HashMap::new();
        let num = subst_poly(&self.num, map, &mut cache);
        if self.den.is_empty() {
            return num;
        }
        let mut den = Expr::one();
        for (f, e) in &self.den {
            let fs = subst_poly(f, map, &mut cache);
            den = &den * &fs.pow(*e as i64).expect("non-negative power");
        }
        num.checked_div(&den).expect("substituted denominator vanished")
    }

    pub fn subs(&self, s: &Symbol, v: &Expr) -> Expr {
        let mut m = HashMap::new();
        m.insert(s.clone(), v.clone());
        self.substitute(&m)
    }

    /// Exact value at a point where every symbol is bound to a rational.
    pub fn evaluate(&self, point: &HashMap<Symbol, Rational>) -> Result<Rational> {
        let map: HashMap<Symbol, Expr> = point.iter().map(|(k, v)| (k.clone(), Expr::rational(v.clone()))).collect();
        let num = subst_poly(&self.num, &map, &mut HashMap::new());
        let mut den = Expr::one();
        for (f, e) in &self.den {
            den = &den * &subst_poly(f, &map, &mut HashMap::new()).pow(*e as i64)?;
        }
        let v = num.checked_div(&den)?;
        v.to_rational()
            .ok_or_else(|| Error::Inconclusive(format!("point does not fix every symbol of {v}")))
    }

    /// Coefficients of the numerator with respect to monomials in the selected symbols.
    pub fn collect_by(&self, select: impl Fn(&Symbol) -> bool) -> Vec<(Monomial, Expr)> {
        let mut groups: Vec<(Monomial, Vec<(Monomial, Rational)>)> = Vec::new();
        for (m, c) in self.num.terms() {
            let (sel, rest): (Vec<_>, Vec<_>) = m.vars().iter().cloned().partition(|(s, _)| select(s));
            let key = Monomial::from_pairs(sel);
            let rest = Monomial::from_pairs(rest);
            match groups.iter_mut().find(|g| g.0 == key) {
                Some(g) => g.1.push((rest, c.clone())),
                None => groups.push((key, vec![(rest, c.clone())])),
            }
        }
        let inv = Expr { num: Poly::one(), den: self.den.clone() };
        let mut out: Vec<(Monomial, Expr)> = groups
            .into_iter()
            .map(|(k, ts)| (k, &Expr::from_poly(Poly::from_terms(ts)) * &inv))
            .collect();
        out.sort_by(|a, b| b.0.cmp(&a.0));
        out
    }

    /// Coefficient of `s^k` when the expression is viewed as a polynomial in `s`.
    pub fn coefficient(&self, s: &Symbol, k: u32) -> Expr {
        let coeffs = self.num.coefficients_in(s);
        let c = coeffs.get(k as usize).cloned().unwrap_or_default();
        &Expr::from_poly(c) * &Expr { num: Poly::one(), den: self.den.clone() }
    }
}

/// Largest radical symbol present in `p`.
fn last_radical(p: &Poly) -> Option<Symbol> {
    p.variables().into_iter().rev().find(|s| s.is_radical())
}

fn exact_root(c: &Rational, q: u32) -> Option<Rational> {
    if c.is_negative() && q.is_multiple_of(2) {
        return None;
    }
    let root = |n: &BigInt| -> Option<BigInt> {
        let r = n.abs().nth_root(q);
        (r.pow(q) == n.abs()).then(|| if n.is_negative() { -r } else { r })
    };
    Some(Rational::new(root(c.numer())?, root(c.denom())?))
}

/// Replaces `s^k` by the radicand wherever the exponent reaches the root index.
pub(crate) fn reduce_radicals(p: Poly) -> Poly {
    let needs = p.terms().iter().any(|(m, _)| {
        m.vars().iter().any(|(s, e)| matches!(s.kind(), Kind::Radical { root, .. } if e >= root))
    });
    if !needs {
        return p;
    }
    let mut out = Poly::zero();
    for (m, c) in p.into_terms() {
        let mut rest: Vec<(Symbol, u32)> = Vec::new();
        let mut factor = Poly::one();
        for (s, e) in m.vars() {
            match s.kind() {
                Kind::Radical { base, root } if e >= root => {
                    factor = factor.mul(&base.pow(e / root));
                    rest.push((s.clone(), e % root));
                }
                _ => rest.push((s.clone(), *e)),
            }
        }
        out = out.add(&factor.mul_term(&Monomial::from_pairs(rest), &c));
    }
    reduce_radicals(out)
}

/// Multiplies `factors` by `f^e`, keeping every stored factor monic, radical free
/// and split off from monomials. Scalars go to `scale`, conjugates to `num`.
fn insert_factor(factors: &mut Vec<(Poly, u32)>, num: &mut Poly, scale: &mut Rational, f: Poly, e: u32) {
    if e == 0 {
        return;
    }
    let f = reduce_radicals(f);
    if let Some(s) = last_radical(&f) {
        if let Kind::Radical { root, .. } = s.kind() {
            let root = *root;
            let coeffs = f.coefficients_in(&s);
            let conj = if root == 2 {
                // (a + b s)(a - b s) = a^2 - b^2 * base
                let a = coeffs.first().cloned().unwrap_or_default();
                let b = coeffs.get(1).cloned().unwrap_or_default();
                Some(a.sub(&b.mul(&Poly::var(s.clone()))))
            } else if f.len() == 1 {
                let k = f.degree_in(&s);
                Some(Poly::term(Monomial::var(s.clone(), root - k % root), Rational::one()))
            } else {
                None
            };
            if let Some(conj) = conj {
                *num = reduce_radicals(num.mul(&conj.pow(e)));
                let g = reduce_radicals(f.mul(&conj));
                insert_factor(factors, num, scale, g, e);
                return;
            }
        }
    }
    if let Some(c) = f.constant_value() {
        *scale = scale.clone() * pow_rat(&c, e);
        return;
    }
    let content = f.content();
    let mono = f.monomial_content();
    let mut g = f.scale(&content.recip());
    if !mono.is_one() {
        g = g.exact_div(&Poly::term(mono.clone(), Rational::one())).expect("monomial content divides");
        for (s, k) in mono.vars() {
            push_factor(factors, Poly::var(s.clone()), k * e);
        }
    }
    *scale = scale.clone() * pow_rat(&content, e);
    for (h, k) in factors.iter_mut() {
        if g.is_constant() {
            break;
        }
        if h.len() == 1 {
            continue;
        }
        while let Some(q) = g.exact_div(h) {
            *k += e;
            g = q;
            if g.is_constant() {
                break;
            }
        }
    }
    if let Some(c) = g.constant_value() {
        *scale = scale.clone() * pow_rat(&c, e);
        return;
    }
    let lc = g.lead_coeff();
    *scale = scale.clone() * pow_rat(&lc, e);
    push_factor(factors, g.monic(), e);
}

fn push_factor(factors: &mut Vec<(Poly, u32)>, f: Poly, e: u32) {
    match factors.binary_search_by(|probe| probe.0.cmp(&f)) {
        Ok(i) => factors[i].1 += e,
        Err(i) => factors.insert(i, (f, e)),
    }
}

fn pow_rat(c: &Rational, e: u32) -> Rational {
    num_traits::pow(c.clone(), e as usize)
}

/// Removes denominator factors that divide the numerator.
fn cancel(mut num: Poly, mut den: Vec<(Poly, u32)>) -> Expr {
    if num.is_zero() {
        return Expr::zero();
    }
    for (f, e) in den.iter_mut() {
        while *e > 0 {
            match num.exact_div(f) {
                Some(q) => {
                    num = q;
                    *e -= 1;
                }
                None => break,
            }
        }
    }
    den.retain(|(_, e)| *e > 0);
    Expr { num, den }
}

fn merge_den(a: &[(Poly, u32)], b: &[(Poly, u32)], sum: bool) -> Vec<(Poly, u32)> {
    let mut out: Vec<(Poly, u32)> = a.to_vec();
    for (f, e) in b {
        match out.binary_search_by(|probe| probe.0.cmp(f)) {
            Ok(i) => {
                out[i].1 = if sum { out[i].1 + e } else { out[i].1.max(*e) };
            }
            Err(i) => out.insert(i, (f.clone(), *e)),
        }
    }
    out
}

fn cofactor(l: &[(Poly, u32)], d: &[(Poly, u32)]) -> Poly {
    let mut out = Poly::one();
    for (f, e) in l {
        let have = d.iter().find(|(g, _)| g == f).map_or(0, |x| x.1);
        if *e > have {
            out = out.mul(&f.pow(e - have));
        }
    }
    out
}

fn add_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den.is_empty() && b.den.is_empty() {
        return Expr { num: a.num.add(&b.num), den: Vec::new() };
    }
    if a.den == b.den {
        return cancel(a.num.add(&b.num), a.den.clone());
    }
    let l = merge_den(&a.den, &b.den, false);
    let na = a.num.mul(&cofactor(&l, &a.den));
    let nb = b.num.mul(&cofactor(&l, &b.den));
    cancel(na.add(&nb), l)
}

fn mul_exprs(a: &Expr, b: &Expr) -> Expr {
    if a.is_zero() || b.is_zero() {
        return Expr::zero();
    }
    let num = reduce_radicals(a.num.mul(&b.num));
    if a.den.is_empty() && b.den.is_empty() {
        return Expr { num, den: Vec::new() };
    }
    cancel(num, merge_den(&a.den, &b.den, true))
}

/// Derivative of a symbol with respect to another, `None` meaning zero.
fn diff_symbol(v: &Symbol, x: &Symbol) -> Option<Expr> {
    if v == x {
        return Some(Expr::one());
    }
    let phase = x.is_coord() || x.is_momentum();
    match v.kind() {
        Kind::FreeFn(_) if phase => Some(Expr::sym(&Symbol::partial(v, vec![x.clone()]))),
        Kind::Partial { func, wrt } if phase => {
            let mut w = wrt.clone();
            w.push(x.clone());
            Some(Expr::sym(&Symbol::partial(func, w)))
        }
        Kind::Radical { base, root } => {
            let db = diff_poly(base, x);
            if db.is_zero() {
                return None;
            }
            let s = Expr::sym(v);
            let q = db.checked_div(&Expr::from_poly(base.clone())).expect("radicand is nonzero");
            Some(&(&Expr::frac(1, *root as i64) * &s) * &q)
        }
        Kind::Param { .. } | Kind::Unknown { .. } | Kind::Aux { .. } if matches!(x.kind(), Kind::Time) => {
            v.tilde_successor().map(|s| Expr::sym(&s))
        }
        _ => None,
    }
}

fn diff_poly(p: &Poly, x: &Symbol) -> Expr {
    let mut out = Expr::zero();
    for v in p.variables() {
        if let Some(dv) = diff_symbol(&v, x) {
            let dp = Expr::from_poly(p.derivative(&v));
            out = &out + &(&dp * &dv);
        }
    }
    out
}

fn depends_on_map(s: &Symbol, map: &HashMap<Symbol, Expr>) -> bool {
    match s.kind() {
        Kind::Radical { base, .. } => base.variables().iter().any(|v| map.contains_key(v) || depends_on_map(v, map)),
        _ => false,
    }
}

fn subst_symbol(s: &Symbol, map: &HashMap<Symbol, Expr>, cache: &mut HashMap<Symbol, Expr>) -> Expr {
    if let Some(v) = map.get(s) {
        return v.clone();
    }
    if let Some(v) = cache.get(s) {
        return v.clone();
    }
    let v = match s.kind() {
        Kind::Radical { base, root } if depends_on_map(s, map) => {
            let b = subst_poly(base, map, cache);
            b.pow_rational(1, *root as i64).expect("radicand stays nonzero")
        }
        _ => Expr::sym(s),
    };
    cache.insert(s.clone(), v.clone());
    v
}

fn subst_poly(p: &Poly, map: &HashMap<Symbol, Expr>, cache: &mut HashMap<Symbol, Expr>) -> Expr {
    let vars = p.variables();
    let values: Vec<(Symbol, Expr)> = vars.iter().map(|s| (s.clone(), subst_symbol(s, map, cache))).collect();
    if values.iter().all(|(_, v)| v.is_polynomial()) {
        let mut pows: HashMap<(Symbol, u32), Poly> = HashMap::new();
        let mut terms = Poly::zero();
        for (m, c) in p.terms() {
            let mut t = Poly::constant(c.clone());
            for (s, e) in m.vars() {
                let key = (s.clone(), *e);
                let pw = pows
                    .entry(key)
                    .or_insert_with(|| {
                        let v = &values.iter().find(|x| &x.0 == s).expect("value present").1;
                        v.num.pow(*e)
                    })
                    .clone();
                t = t.mul(&pw);
            }
            terms = terms.add(&t);
        }
        return Expr::from_poly(terms);
    }
    let mut out = Expr::zero();
    for (m, c) in p.terms() {
        let mut t = Expr::rational(c.clone());
        for (s, e) in m.vars() {
            let v = &values.iter().find(|x| &x.0 == s).expect("value present").1;
            t = &t * &v.pow(*e as i64).expect("non-negative power");
        }
        out = &out + &t;
    }
    out
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        add_exprs(self, rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        add_exprs(self, &-rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        mul_exprs(self, rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        add_exprs(&self, &rhs)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        &self - &rhs
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        mul_exprs(&self, &rhs)
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        iter.fold(Expr::zero(), |a, b| &a + &b)
    }
}

impl From<&Symbol> for Expr {
    fn from(s: &Symbol) -> Expr {
        Expr::sym(s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Normal form. Expressions are kept normalised by construction, so this only
/// re-runs cancellation; it is idempotent.
pub fn normalize(e: &Expr) -> Expr {
    cancel(reduce_radicals(e.num.clone()), e.den.clone())
}

/// Partial derivative of `e` with respect to `s`.
pub fn diff(e: &Expr, s: &Symbol) -> Expr {
    e.diff(s)
}

/// Simultaneous substitution.
pub fn substitute(e: &Expr, bindings: &HashMap<Symbol, Expr>) -> Expr {
    e.substitute(bindings)
}

/// Zero test. Assumptions only justify cancellations, which are already applied
/// generically; the canonical numerator decides.
pub fn is_zero(e: &Expr, _a: &Assumptions) -> bool {
    e.is_zero()
}

/// Normal form of `e` modulo the ideal generated by `gens`.
pub fn reduce_mod_ideal(e: &Expr, gens: &[Expr], _a: &Assumptions) -> Result<Expr> {
    Ideal::new(gens, DEFAULT_DEGREE_CAP).reduce(e)
}

/// Canonical representative of the constraint surface `e = 0`.
///
/// Writes the numerator as `c * m * g` with `m` its monomial content. When
/// `m` is trivial and there is no denominator the scalar is kept, so
/// `-(1/2)*(p^2 + m^2)` becomes `(1/2)*(p^2 + m^2)`. Otherwise factors known to
/// be nonzero are dropped, repeated factors are made simple, radicals are
/// replaced by their radicands, and the result is made primitive. The sign
/// makes the leading phase-space term positive.
pub fn constraint_form(e: &Expr, a: &Assumptions) -> Expr {
    let raw = e.numerator();
    if raw.is_zero() {
        return Expr::zero();
    }
    let content = raw.content();
    let mono = raw.monomial_content();
    let g = raw
        .exact_div(&Poly::term(mono.clone(), content.clone()))
        .expect("content divides");
    let mut changed = !e.den.is_empty();
    let mut kept: Vec<(Symbol, u32)> = Vec::new();
    let mut factor = Poly::one();
    for (s, k) in mono.vars() {
        if a.is_nonzero(s) {
            changed = true;
            continue;
        }
        if let Kind::Radical { base, .. } = s.kind() {
            changed = true;
            factor = factor.mul(base);
            continue;
        }
        if *k > 1 {
            changed = true;
        }
        kept.push((s.clone(), 1));
    }
    let mut out = g.mul(&factor).mul_term(&Monomial::from_pairs(kept), &Rational::one());
    out = if changed { out.primitive() } else { out.scale(&content) };
    if phase_lead_coeff(&out).is_some_and(|c| c.is_negative()) {
        out = out.neg();
    }
    Expr::from_poly(out)
}

fn is_phase(s: &Symbol) -> bool {
    !s.is_parameter_like()
}

/// Coefficient of the leading term when constants and parameters are treated
/// as coefficients: graded order on the phase-space part first.
pub(crate) fn phase_lead_coeff(p: &Poly) -> Option<Rational> {
    p.terms()
        .iter()
        .max_by(|x, y| {
            let px = Monomial::from_pairs(x.0.vars().iter().filter(|v| is_phase(&v.0)).cloned().collect());
            let py = Monomial::from_pairs(y.0.vars().iter().filter(|v| is_phase(&v.0)).cloned().collect());
            px.cmp(&py).then_with(|| x.0.cmp(&y.0))
        })
        .map(|t| t.1.clone())
}

/// Largest exponent of any variable, used to bound printed sizes in reports.
pub fn max_exponent(e: &Expr) -> u32 {
    e.num.terms().iter().flat_map(|(m, _)| m.vars().iter().map(|v| v.1)).max().unwrap_or(0)
}

/// Integer value of a constant expression, when it has one.
pub fn as_i64(e: &Expr) -> Option<i64> {
    let r = e.to_rational()?;
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}
