//! Sparse multivariate polynomials in graded-lexicographic order.
//!
//! The arithmetic is generic over the coefficient field; the engine itself only
//! instantiates it with exact rationals (see the `Poly` default parameter).

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::symbol::Symbol;
use crate::Rational;

/// Field operations needed by the polynomial arithmetic.
pub trait Coeff:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
{
}

/// Power product; variables are stored largest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    deg: u32,
    vars: SmallVec<[(Symbol, u32); 4]>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn var(s: Symbol, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        let mut vars = SmallVec::new();
        vars.push((s, e));
        Monomial { deg: e, vars }
    }

    /// Builds from unsorted pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Monomial {
        pairs.sort_by(|a, b| b.0.cmp(&a.0));
        let mut vars: SmallVec<[(Symbol, u32); 4]> = SmallVec::new();
        for (s, e) in pairs {
            if e == 0 {
                continue;
            }
            match vars.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => vars.push((s, e)),
            }
        }
        let deg = vars.iter().map(|v| v.1).sum();
        Monomial { deg, vars }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// Number of leading variables that live on phase space.
    fn phase_len(&self) -> usize {
        self.vars.iter().take_while(|v| !v.0.is_parameter_like()).count()
    }

    /// Degree in phase-space variables.
    pub fn phase_degree(&self) -> u32 {
        self.vars.iter().take_while(|v| !v.0.is_parameter_like()).map(|v| v.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[(Symbol, u32)] {
        &self.vars
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.vars.iter().find(|v| &v.0 == s).map_or(0, |v| v.1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars: SmallVec<[(Symbol, u32); 4]> = SmallVec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (a, b) = (&self.vars[i], &other.vars[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    vars.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    vars.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    vars.push((a.0.clone(), a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend(self.vars[i..].iter().cloned());
        vars.extend(other.vars[j..].iter().cloned());
        Monomial { deg: self.deg + other.deg, vars }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        if self.deg > other.deg {
            return false;
        }
        self.vars.iter().all(|(s, e)| other.exponent(s) >= *e)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let vars: SmallVec<[(Symbol, u32); 4]> = other
            .vars
            .iter()
            .filter_map(|(s, e)| {
                let d = e - self.exponent(s);
                (d > 0).then(|| (s.clone(), d))
            })
            .collect();
        Monomial { deg: other.deg - self.deg, vars }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(Symbol, u32)> = self.vars.to_vec();
        for (s, e) in &other.vars {
            match pairs.iter_mut().find(|p| &p.0 == s) {
                Some(p) => p.1 = p.1.max(*e),
                None => pairs.push((s.clone(), *e)),
            }
        }
        Monomial::from_pairs(pairs)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let pairs = self
            .vars
            .iter()
            .filter_map(|(s, e)| {
                let m = (*e).min(other.exponent(s));
                (m > 0).then(|| (s.clone(), m))
            })
            .collect();
        Monomial::from_pairs(pairs)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.vars.iter().all(|(s, _)| other.exponent(s) == 0)
    }

    /// Removes `s` entirely, returning its exponent and the rest.
    pub fn split_var(&self, s: &Symbol) -> (u32, Monomial) {
        let e = self.exponent(s);
        if e == 0 {
            return (0, self.clone());
        }
        let vars: SmallVec<[(Symbol, u32); 4]> = self.vars.iter().filter(|v| &v.0 != s).cloned().collect();
        (e, Monomial { deg: self.deg - e, vars })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Block order: the phase-space part by graded lex, then the part in
    /// constants and parameters by graded lex. Equivalent to graded lex over
    /// the parameter coefficient field.
    fn cmp(&self, other: &Self) -> Ordering {
        let (pa, pb) = (self.phase_len(), other.phase_len());
        let (da, db) = (self.phase_degree(), other.phase_degree());
        let lex = |x: &[(Symbol, u32)], y: &[(Symbol, u32)]| {
            for (a, b) in x.iter().zip(y.iter()) {
                let c = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
                if c != Ordering::Equal {
                    return c;
                }
            }
            x.len().cmp(&y.len())
        };
        da.cmp(&db)
            .then_with(|| lex(&self.vars[..pa], &other.vars[..pb]))
            .then_with(|| (self.deg - da).cmp(&(other.deg - db)))
            .then_with(|| lex(&self.vars[pa..], &other.vars[pb..]))
    }
}

/// Polynomial with terms sorted by decreasing monomial; no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<C = Rational> {
    terms: Vec<(Monomial, C)>,
}

impl<C: Coeff> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: Vec::new() }
    }
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn one() -> Self {
        Poly::constant(C::one())
    }

    pub fn var(s: Symbol) -> Self {
        Poly { terms: vec![(Monomial::var(s, 1), C::one())] }
    }

    pub fn term(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(mut terms: Vec<(Monomial, C)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => {
                    let sum = last.1.clone() + c;
                    last.1 = sum;
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<C> {
        match self.terms.as_slice() {
            [] => Some(C::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    /// Drops the leading term.
    pub fn without_lead(mut self) -> Self {
        if !self.terms.is_empty() {
            self.terms.remove(0);
        }
        self
    }

    pub fn lead_coeff(&self) -> C {
        self.terms.first().map_or_else(C::zero, |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(s)).max().unwrap_or(0)
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.iter().any(|t| t.0.exponent(s) > 0)
    }

    /// Distinct variables, in increasing order.
    pub fn variables(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self
            .terms
            .iter()
            .flat_map(|t| t.0.vars().iter().map(|p| p.0.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, k: &C) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c.clone() * k.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let adj = |c: &C| if negate { -c.clone() } else { c.clone() };
        while i < self.terms.len() && j < other.terms.len() {
            let (a, b) = (&self.terms[i], &other.terms[j]);
            match a.0.cmp(&b.0) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b.0.clone(), adj(&b.1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a.1.clone() + adj(&b.1);
                    if !c.is_zero() {
                        out.push((a.0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|t| (t.0.clone(), adj(&t.1))));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        let mut prods = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                prods.push((m1.mul(m2), c1.clone() * c2.clone()));
            }
        }
        Poly::from_terms(prods)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (lm, lc) = d.lead()?;
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                out.push((lm.quotient_of(m), c.clone() / lc.clone()));
            }
            return Some(Poly { terms: out });
        }
        for s in d.variables() {
            if self.degree_in(&s) < d.degree_in(&s) {
                return None;
            }
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((m, c)) = rem.lead().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = lm.quotient_of(&m);
            let qc = c / lc.clone();
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly::from_terms(quot))
    }

    /// Partial derivative treating every variable as independent.
    pub fn derivative(&self, s: &Symbol) -> Self {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(s);
            if e == 0 {
                continue;
            }
            let mut k = C::zero();
            for _ in 0..e {
                k = k + C::one();
            }
            out.push((rest.mul(&Monomial::var(s.clone(), e - 1)), c.clone() * k));
        }
        Poly::from_terms(out)
    }

    /// Collects coefficients with respect to powers of `s`: `self = sum_k c_k s^k`.
    pub fn coefficients_in(&self, s: &Symbol) -> Vec<Self> {
        let deg = self.degree_in(s) as usize;
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_var(s);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    /// Greatest common monomial divisor of all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }
}

impl Poly<Rational> {
    pub fn from_int(n: i64) -> Self {
        Poly::constant(Rational::from_integer(BigInt::from(n)))
    }

    /// Positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rational::one();
        }
        Rational::new(num, den)
    }

    /// Primitive part normalised to a positive leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lead_coeff().is_negative() {
            c = -c;
        }
        self.scale(&c.recip())
    }

    /// Scaled so that the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead_coeff().recip())
    }
}
