//! Polynomial ideals and reduction to a canonical normal form.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use super::poly::{Monomial, Poly};
use super::symbol::{Kind, Symbol};
use super::{cancel, reduce_radicals, Expr};
use crate::{Error, Result};

/// Default bound on the total degree of Groebner basis elements.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

/// Ideal generated by the numerators of a list of expressions.
pub struct Ideal {
    gens: Vec<Poly>,
    cap: u32,
    cache: Mutex<HashMap<Vec<Symbol>, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal::from_polys(self.gens.clone(), self.cap)
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.gens.iter().map(|g| g.to_string())).finish()
    }
}

fn radicals_of(p: &Poly, out: &mut BTreeSet<Symbol>) {
    for v in p.variables() {
        if let Kind::Radical { base, .. } = v.kind() {
            radicals_of(base, out);
            out.insert(v);
        }
    }
}

impl Ideal {
    pub fn new(gens: &[Expr], cap: u32) -> Ideal {
        Ideal::from_polys(gens.iter().map(|g| g.numerator().clone()).collect(), cap)
    }

    pub fn from_polys(gens: Vec<Poly>, cap: u32) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { gens, cap, cache: Mutex::new(HashMap::new()) }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    pub fn with(&self, extra: &[Expr]) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().map(|g| g.numerator().clone()));
        Ideal::from_polys(gens, self.cap)
    }

    /// Reduced Groebner basis of the generators together with the defining
    /// relations of the given radicals. A radical whose radicand lies in the
    /// ideal is itself added, since it vanishes on the variety.
    fn basis(&self, radicals: &BTreeSet<Symbol>) -> Result<Arc<Vec<Poly>>> {
        let key: Vec<Symbol> = radicals.iter().cloned().collect();
        if let Some(b) = self.cache.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
            return Ok(b.clone());
        }
        let mut gens = self.gens.clone();
        for s in radicals {
            if let Kind::Radical { base, root } = s.kind() {
                gens.push(Poly::var(s.clone()).pow(*root).sub(base));
            }
        }
        let mut basis = groebner_basis(gens.clone(), self.cap)?;
        let mut closed: BTreeSet<Symbol> = BTreeSet::new();
        loop {
            let mut grew = false;
            for s in radicals {
                if closed.contains(s) {
                    continue;
                }
                if let Kind::Radical { base, .. } = s.kind() {
                    if normal_form(base, &basis).is_zero() {
                        closed.insert(s.clone());
                        gens.push(Poly::var(s.clone()));
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
            basis = groebner_basis(gens.clone(), self.cap)?;
        }
        let basis = Arc::new(basis);
        self.cache.lock().unwrap_or_else(|e| e.into_inner()).insert(key, basis.clone());
        Ok(basis)
    }

    fn basis_for(&self, p: &Poly) -> Result<Arc<Vec<Poly>>> {
        let mut rads = BTreeSet::new();
        for g in &self.gens {
            radicals_of(g, &mut rads);
        }
        radicals_of(p, &mut rads);
        self.basis(&rads)
    }

    /// Canonical representative of the numerator modulo the ideal.
    pub fn reduce(&self, e: &Expr) -> Result<Expr> {
        if e.is_zero() || self.gens.is_empty() {
            return Ok(e.clone());
        }
        let basis = self.basis_for(e.numerator())?;
        let nf = reduce_radicals(normal_form(e.numerator(), &basis));
        Ok(cancel(nf, e.denominator_factors().to_vec()))
    }

    pub fn contains(&self, e: &Expr) -> Result<bool> {
        Ok(self.reduce(e)?.is_zero())
    }

    /// Whether `e` reduces to zero modulo the ideal, for a polynomial argument.
    pub fn contains_poly(&self, p: &Poly) -> Result<bool> {
        if p.is_zero() {
            return Ok(true);
        }
        let basis = self.basis_for(p)?;
        Ok(normal_form(p, &basis).is_zero())
    }
}

/// Terms still to be reduced, largest monomial first.
struct Pending(BTreeMap<Monomial, crate::Rational>);

impl Pending {
    fn new(p: &Poly) -> Self {
        Pending(p.terms().iter().cloned().collect())
    }

    fn pop(&mut self) -> Option<(Monomial, crate::Rational)> {
        self.0.pop_last()
    }

    /// Subtracts `k * q * g` without its leading term, which the caller has
    /// already cancelled.
    fn sub_tail(&mut self, g: &Poly, q: &Monomial, k: &crate::Rational) {
        for (m, c) in g.terms().iter().skip(1) {
            let m = m.mul(q);
            let d = c.clone() * k.clone();
            match self.0.entry(m) {
                Entry::Vacant(v) => {
                    v.insert(-d);
                }
                Entry::Occupied(mut o) => {
                    *o.get_mut() -= d;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
            }
        }
    }
}

/// Full reduction of `p` by `basis`.
pub(crate) fn normal_form(p: &Poly, basis: &[Poly]) -> Poly {
    if basis.is_empty() {
        return p.clone();
    }
    let mut rem: Vec<(Monomial, crate::Rational)> = Vec::new();
    let mut pending = Pending::new(p);
    while let Some((m, c)) = pending.pop() {
        match basis.iter().find(|g| g.lead().is_some_and(|(lm, _)| lm.divides(&m))) {
            Some(g) => {
                let (lm, lc) = g.lead().expect("nonzero basis element");
                pending.sub_tail(g, &lm.quotient_of(&m), &(c / lc.clone()));
            }
            None => rem.push((m, c)),
        }
    }
    Poly::from_terms(rem)
}

/// Multivariate division of `p` by `divisors` in order. Returns the quotients
/// and the remainder, so that `p = sum q_i d_i + r`.
pub fn divide(p: &Poly, divisors: &[Poly]) -> (Vec<Poly>, Poly) {
    let mut quots: Vec<Vec<(Monomial, crate::Rational)>> = vec![Vec::new(); divisors.len()];
    let mut rem: Vec<(Monomial, crate::Rational)> = Vec::new();
    let mut pending = Pending::new(p);
    while let Some((m, c)) = pending.pop() {
        let hit = divisors.iter().position(|d| d.lead().is_some_and(|(lm, _)| lm.divides(&m)));
        match hit {
            Some(i) => {
                let (lm, lc) = divisors[i].lead().expect("nonzero divisor");
                let k = c / lc.clone();
                let q = lm.quotient_of(&m);
                pending.sub_tail(&divisors[i], &q, &k);
                quots[i].push((q, k));
            }
            None => rem.push((m, c)),
        }
    }
    (quots.into_iter().map(Poly::from_terms).collect(), Poly::from_terms(rem))
}

fn spoly(f: &Poly, g: &Poly) -> Poly {
    let (mf, cf) = f.lead().expect("nonzero");
    let (mg, cg) = g.lead().expect("nonzero");
    let l = mf.lcm(mg);
    let a = f.mul_term(&mf.quotient_of(&l), &(cf.clone().recip()));
    let b = g.mul_term(&mg.quotient_of(&l), &(cg.clone().recip()));
    a.sub(&b)
}

/// Reduced Groebner basis by Buchberger's algorithm with the coprime and chain
/// criteria. Fails once an element exceeds the degree cap.
pub fn groebner_basis(gens: Vec<Poly>, cap: u32) -> Result<Vec<Poly>> {
    let mut basis: Vec<Poly> = Vec::new();
    for g in gens {
        let r = normal_form(&g, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.iter().any(|g| g.is_constant()) {
        return Ok(vec![Poly::one()]);
    }
    let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.insert((pair_degree(&basis, i, j), i, j));
        }
    }
    while let Some(&pair) = pairs.iter().next() {
        pairs.remove(&pair);
        let (_, i, j) = pair;
        let (mi, mj) = (&basis[i].lead().expect("nonzero").0, &basis[j].lead().expect("nonzero").0);
        if mi.is_coprime(mj) {
            continue;
        }
        let l = mi.lcm(mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().is_some_and(|(mk, _)| mk.divides(&l))
                && !has_pair(&pairs, i, k)
                && !has_pair(&pairs, j, k)
        });
        if chain {
            continue;
        }
        let r = normal_form(&spoly(&basis[i], &basis[j]), &basis);
        if r.is_zero() {
            continue;
        }
        if r.total_degree() > cap {
            return Err(Error::DegreeCapExceeded(cap));
        }
        let r = r.monic();
        if r.is_constant() {
            return Ok(vec![Poly::one()]);
        }
        basis.push(r);
        let n = basis.len() - 1;
        for k in 0..n {
            pairs.insert((pair_degree(&basis, k, n), k, n));
        }
    }
    Ok(interreduce(basis))
}

fn has_pair(pairs: &BTreeSet<(u32, usize, usize)>, a: usize, b: usize) -> bool {
    let (i, j) = if a < b { (a, b) } else { (b, a) };
    pairs.iter().any(|&(_, x, y)| x == i && y == j)
}

fn pair_degree(basis: &[Poly], i: usize, j: usize) -> u32 {
    let a = &basis[i].lead().expect("nonzero").0;
    let b = &basis[j].lead().expect("nonzero").0;
    a.lcm(b).degree()
}

fn interreduce(basis: Vec<Poly>) -> Vec<Poly> {
    let mut keep: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lm = &g.lead().expect("nonzero").0;
        let redundant = basis.iter().enumerate().any(|(k, h)| {
            let hm = &h.lead().expect("nonzero").0;
            k != i && hm.divides(lm) && (hm != lm || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Poly> = keep.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, p)| p.clone()).collect();
        let r = normal_form(&keep[i], &others).monic();
        debug_assert!(!r.lead_coeff().is_zero());
        out.push(r);
    }
    out.sort_by(|a, b| a.lead().map(|t| &t.0).cmp(&b.lead().map(|t| &t.0)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(name: &str, i: usize) -> Poly {
        Poly::var(Symbol::coord(name, i))
    }

    #[test]
    fn basis_of_twisted_cubic_has_three_elements() {
        let (x, y, z) = (v("x", 1), v("y", 2), v("z", 3));
        let gens = vec![y.sub(&x.pow(2)), z.sub(&x.pow(3))];
        let gb = groebner_basis(gens, 12).unwrap();
        let ideal = Ideal::from_polys(gb.clone(), 12);
        assert!(ideal.contains_poly(&z.sub(&x.mul(&y))).unwrap());
        assert!(!ideal.contains_poly(&x).unwrap());
    }

    #[test]
    fn reduction_is_canonical() {
        let (x, y) = (v("x", 1), v("y", 2));
        let ideal = Ideal::from_polys(vec![x.mul(&x).sub(&y)], 12);
        let a = Expr::from_poly(x.pow(4));
        let b = Expr::from_poly(y.mul(&y));
        assert_eq!(ideal.reduce(&a).unwrap(), ideal.reduce(&b).unwrap());
    }

    #[test]
    fn radical_vanishes_with_its_radicand() {
        let p = v("pq1", 1);
        let s = Expr::from_poly(p.clone()).sqrt().unwrap();
        let ideal = Ideal::from_polys(vec![p], 12);
        assert!(ideal.reduce(&s).unwrap().is_zero());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let (x, y) = (v("x", 1), v("y", 2));
        let gens = vec![x.pow(3).sub(&y.pow(2)), x.mul(&y).pow(2).sub(&x)];
        assert!(matches!(groebner_basis(gens, 2), Err(Error::DegreeCapExceeded(2))));
    }
}
