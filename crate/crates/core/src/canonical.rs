//! Canonical picture: velocity solution, primary constraints, Hamiltonian,
//! secondary chain, class split, pull-backs and the Dirac bracket.

use std::collections::HashMap;

use crate::brackets::poisson;
use crate::expr::{constraint_form, Expr, Ideal, Kind, Symbol};
use crate::lagrangian::{independence_filter, LagAnalysis};
use crate::linalg::{inverse, mat_vec, sweep_out, Matrix};
use crate::model::Model;
use crate::transform::{delta_l, pullback_htr};
use crate::{Error, Options, Result};

/// First and second class parts of the constraint set.
#[derive(Clone, Debug, Default)]
pub struct ClassSplit {
    pub first: Vec<Expr>,
    pub second: Vec<Expr>,
    /// Rank of the bracket matrix.
    pub rank: usize,
}

/// A tilde image that fixes free functions instead of adding a constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierCondition {
    /// Chain level at which the condition appeared, starting at 1.
    pub level: usize,
    pub expr: Expr,
}

#[derive(Clone, Debug)]
pub struct CanAnalysis {
    /// `U^A(q, pi)`, with free functions on the null directions.
    pub uhat: Vec<Expr>,
    pub free_functions: Vec<Symbol>,
    pub user_solution: bool,
    pub primaries: Vec<Expr>,
    pub hamiltonian: Expr,
    /// Levels starting at order one.
    pub secondaries: Vec<Vec<Expr>>,
    /// Preservation conditions that fix free functions instead of
    /// constraining phase space.
    pub multiplier_conditions: Vec<MultiplierCondition>,
    pub chain_terminated: bool,
    /// Brackets among all constraints, reduced modulo the constraints.
    pub x_matrix: Matrix,
    pub class: ClassSplit,
}

impl CanAnalysis {
    pub fn secondary_flat(&self) -> Vec<Expr> {
        self.secondaries.iter().flatten().cloned().collect()
    }

    /// Primaries followed by the secondary levels.
    pub fn all_constraints(&self) -> Vec<Expr> {
        let mut out = self.primaries.clone();
        out.extend(self.secondary_flat());
        out
    }

    pub fn is_first_class(&self) -> bool {
        self.class.second.is_empty()
    }
}

/// Free functions and their opaque partials.
pub fn is_free_function(s: &Symbol) -> bool {
    matches!(s.kind(), Kind::FreeFn(_) | Kind::Partial { .. })
}

fn theta(k: usize) -> Symbol {
    Symbol::free_fn(&format!("theta{k}"), k)
}

/// Solves `pi_A = W_A(q, u)` for `u`. Affine momenta are inverted on the
/// pivot directions with free functions on the null directions; otherwise the
/// model must carry a velocity solution, checked later by
/// [`verify_velocity_solution`].
pub fn solve_velocity(m: &Model, la: &LagAnalysis) -> Result<(Vec<Expr>, bool)> {
    if let Some(u) = &m.usolution {
        return Ok((u.clone(), true));
    }
    let affine = la.m.iter().flatten().all(|e| !e.contains_where(|s| s.is_velocity()));
    if !affine {
        return Err(Error::NonlinearNoUserSolution);
    }
    let n = m.n();
    let zero_u = m.velocity_map(&vec![Expr::zero(); n]);
    let rhs: Vec<Expr> =
        m.momenta.iter().zip(&la.w).map(|(p, w)| &Expr::sym(p) - &w.substitute(&zero_u)).collect();
    let qr = mat_vec(&la.qmat, &rhs);
    let r = la.rank;
    let thetas: Vec<Expr> = (0..n - r).map(|j| Expr::sym(&theta(j + 1))).collect();
    let mut u = vec![Expr::zero(); n];
    for i in 0..r {
        let hom: Expr = la.n_block[i].iter().zip(&thetas).map(|(nij, t)| nij * t).sum();
        u[la.c_perm[i]] = &qr[i] - &hom;
    }
    for (j, t) in thetas.into_iter().enumerate() {
        u[la.c_perm[r + j]] = t;
    }
    Ok((u, false))
}

/// `phi_n = z^(n) . (pi - W)` on the velocity solution, independent members only.
pub fn primary_constraints(m: &Model, la: &LagAnalysis, uhat: &[Expr], cap: u32) -> Result<Vec<Expr>> {
    let sub = m.velocity_map(uhat);
    let diffs: Vec<Expr> = m.momenta.iter().zip(&la.w).map(|(p, w)| &Expr::sym(p) - &w.substitute(&sub)).collect();
    let cands: Vec<Expr> = la
        .z
        .iter()
        .map(|z| {
            let s: Expr = z.iter().zip(&diffs).map(|(a, b)| &a.substitute(&sub) * b).sum();
            constraint_form(&s, &m.assumptions)
        })
        .collect();
    independence_filter(&cands, &[], cap)
}

/// Checks `pi_A - W_A(q, U) = 0 mod phi` for every `A`.
pub fn verify_velocity_solution(m: &Model, la: &LagAnalysis, uhat: &[Expr], phi: &[Expr], cap: u32) -> Result<()> {
    let sub = m.velocity_map(uhat);
    let ideal = Ideal::new(phi, cap);
    for (a, (p, w)) in m.momenta.iter().zip(&la.w).enumerate() {
        if !ideal.contains(&(&Expr::sym(p) - &w.substitute(&sub)))? {
            return Err(Error::UserSolutionInvalid { index: a + 1 });
        }
    }
    Ok(())
}

/// `H = pi_A U^A - L(q, U)`.
pub fn hamiltonian(m: &Model, uhat: &[Expr]) -> Expr {
    let pu: Expr = m.momenta.iter().zip(uhat).map(|(p, u)| &Expr::sym(p) * u).sum();
    &pu - &m.lagrangian.substitute(&m.velocity_map(uhat))
}

/// `F~ = dF/dtau + {F, H}`.
pub fn tilde(f: &Expr, h: &Expr, m: &Model) -> Expr {
    &f.diff(&Symbol::time()) + &poisson(f, h, m)
}

/// Secondary chain. Each candidate is reduced modulo all earlier levels,
/// primaries included. A surviving candidate that involves a free function
/// fixes that function and is recorded as a multiplier condition.
pub fn secondary_chain(
    phi: &[Expr],
    h: &Expr,
    m: &Model,
    opts: &Options,
) -> Result<(Vec<Vec<Expr>>, Vec<MultiplierCondition>, bool)> {
    let cap = opts.degree_cap;
    let a = &m.assumptions;
    let max_order = opts.max_order.unwrap_or(m.max_chain_order);
    let phi_ideal = Ideal::new(phi, cap);
    let mut known = phi.to_vec();
    let mut levels = Vec::new();
    let mut conditions: Vec<MultiplierCondition> = Vec::new();
    let mut frontier: Vec<Expr> = phi.iter().map(|f| tilde(f, h, m)).collect();
    for _ in 0..max_order {
        let ideal = Ideal::new(&known, cap);
        let mut accepted: Vec<Expr> = Vec::new();
        for cand in &frontier {
            let full = ideal.reduce(cand)?;
            if full.is_zero() {
                continue;
            }
            if full.contains_where(is_free_function) {
                let c = MultiplierCondition { level: levels.len() + 1, expr: constraint_form(&full, a) };
                if !conditions.iter().any(|k| k.expr == c.expr) {
                    conditions.push(c);
                }
                continue;
            }
            let mut rep = constraint_form(&phi_ideal.reduce(cand)?, a);
            if rep.contains_where(is_free_function) {
                rep = constraint_form(&full, a);
            }
            let mut gens = known.clone();
            gens.extend(accepted.iter().cloned());
            if !Ideal::new(&gens, cap).contains(&rep)? {
                accepted.push(rep);
            }
        }
        if accepted.is_empty() {
            return Ok((levels, conditions, true));
        }
        frontier = accepted.iter().map(|c| tilde(c, h, m)).collect();
        known.extend(accepted.iter().cloned());
        levels.push(accepted);
    }
    Ok((levels, conditions, false))
}

/// Bracket matrix reduced modulo the constraints and the resulting class split.
pub fn classify(constraints: &[Expr], m: &Model, opts: &Options) -> Result<(Matrix, ClassSplit)> {
    let ideal = Ideal::new(constraints, opts.degree_cap);
    let n = constraints.len();
    let mut x = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = ideal.reduce(&poisson(&constraints[i], &constraints[j], m))?;
            x[j][i] = -&r;
            x[i][j] = r;
        }
    }
    let sw = sweep_out(&x, &m.assumptions, opts.strict_pivots)?;
    if sw.rank == 0 {
        return Ok((x, ClassSplit { first: constraints.to_vec(), second: Vec::new(), rank: 0 }));
    }
    let mut picked = sw.c_perm[..sw.rank].to_vec();
    picked.sort_unstable();
    let second = picked.iter().map(|&c| constraints[c].clone()).collect();
    let first = sw.q[sw.rank..]
        .iter()
        .map(|z| {
            let s: Expr = z.iter().zip(constraints).map(|(a, c)| a * c).sum();
            constraint_form(&s, &m.assumptions)
        })
        .filter(|e| !e.is_zero())
        .collect();
    Ok((x, ClassSplit { first, second, rank: sw.rank }))
}

/// Substitutes `pi_A -> W_A(q, u)`.
pub fn pullback(f: &Expr, m: &Model, la: &LagAnalysis) -> Expr {
    f.substitute(&m.momentum_map(&la.w))
}

/// Whether `f` vanishes wherever the generators do, testing `f^k` for small `k`.
fn in_radical(f: &Expr, ideal: &Ideal) -> Result<bool> {
    let mut p = f.numerator_expr();
    for _ in 0..4 {
        if ideal.contains(&p)? {
            return Ok(true);
        }
        p = &p * &f.numerator_expr();
    }
    Ok(false)
}

/// Level by level, the pulled-back secondaries and the Lagrangian constraints
/// cut out the same set modulo all lower levels of both chains. Multiplier
/// conditions count at their level with free functions read as velocities.
pub fn verify_secondary_equals_lc(can: &CanAnalysis, la: &LagAnalysis, m: &Model, cap: u32) -> Result<bool> {
    let lc = la.constraint_levels();
    let depth = can.multiplier_conditions.iter().map(|c| c.level).max().unwrap_or(0).max(can.secondaries.len());
    if lc.len() != depth {
        return Ok(false);
    }
    let as_velocity: HashMap<Symbol, Expr> = can
        .uhat
        .iter()
        .zip(&m.velocities)
        .filter_map(|(u, v)| {
            let s = u.symbols();
            (s.len() == 1 && matches!(s[0].kind(), Kind::FreeFn(_)) && *u == Expr::sym(&s[0]))
                .then(|| (s[0].clone(), Expr::sym(v)))
        })
        .collect();
    let mut lower: Vec<Expr> = Vec::new();
    for (k, ell) in lc.iter().enumerate() {
        let mut pb: Vec<Expr> = can.secondaries.get(k).map(|l| l.iter().map(|c| pullback(c, m, la)).collect()).unwrap_or_default();
        pb.extend(
            can.multiplier_conditions
                .iter()
                .filter(|c| c.level == k + 1)
                .map(|c| pullback(&c.expr.substitute(&as_velocity), m, la)),
        );
        let with_ell = Ideal::new(&[lower.clone(), ell.clone()].concat(), cap);
        let with_pb = Ideal::new(&[lower.clone(), pb.clone()].concat(), cap);
        for p in &pb {
            if !in_radical(p, &with_ell)? {
                return Ok(false);
            }
        }
        for l in ell {
            if !in_radical(l, &with_pb)? {
                return Ok(false);
            }
        }
        lower.extend(pb);
        lower.extend(ell.iter().cloned());
    }
    Ok(true)
}

/// `qdot^A = dH/dpi_A`, `pidot_A = -dH/dq^A`.
pub fn canonical_eom(h: &Expr, m: &Model) -> (Vec<Expr>, Vec<Expr>) {
    let qdot = m.momenta.iter().map(|p| h.diff(p)).collect();
    let pdot = m.coords.iter().map(|q| -h.diff(q)).collect();
    (qdot, pdot)
}

/// `{F, G}_D = {F, G} - {F, phi_i} (X^-1)_ij {phi_j, G}` with `X_ij = {phi_i, phi_j}`.
pub fn dirac_bracket(f: &Expr, g: &Expr, second: &[Expr], m: &Model) -> Result<Expr> {
    let base = poisson(f, g, m);
    if second.is_empty() {
        return Ok(base);
    }
    let x: Matrix = second.iter().map(|a| second.iter().map(|b| poisson(a, b, m)).collect()).collect();
    let inv = inverse(&x, &m.assumptions)?;
    let fphi: Vec<Expr> = second.iter().map(|c| poisson(f, c, m)).collect();
    let phig: Vec<Expr> = second.iter().map(|c| poisson(c, g, m)).collect();
    let mut corr = Expr::zero();
    for (i, fi) in fphi.iter().enumerate() {
        for (j, gj) in phig.iter().enumerate() {
            corr = &corr + &(&(fi * &inv[i][j]) * gj);
        }
    }
    Ok(&base - &corr)
}

/// Residual of `delta_Q H + Delta L|_(u = U)` modulo the primaries; zero when
/// the identity holds.
pub fn verify_variation_identity(q: &Expr, m: &Model, la: &LagAnalysis, can: &CanAnalysis, cap: u32) -> Result<Expr> {
    if q.is_zero() {
        return Ok(Expr::zero());
    }
    let lt = pullback_htr(q, m, la)?;
    let dl = delta_l(&lt.eps, lt.e.as_ref(), m, la)?;
    let lhs = poisson(&can.hamiltonian, q, m);
    let total = &lhs + &dl.substitute(&m.velocity_map(&can.uhat));
    Ideal::new(&can.primaries, cap).reduce(&total)
}

/// Runs the canonical analysis.
pub fn analyze(m: &Model, la: &LagAnalysis, opts: &Options) -> Result<CanAnalysis> {
    let cap = opts.degree_cap;
    let (uhat, user_solution) = solve_velocity(m, la)?;
    let primaries = primary_constraints(m, la, &uhat, cap)?;
    verify_velocity_solution(m, la, &uhat, &primaries, cap)?;
    let mut free_functions: Vec<Symbol> = Vec::new();
    for u in &uhat {
        for s in u.symbols() {
            if matches!(s.kind(), Kind::FreeFn(_)) && !free_functions.contains(&s) {
                free_functions.push(s);
            }
        }
    }
    let hamiltonian = hamiltonian(m, &uhat);
    let (secondaries, multiplier_conditions, chain_terminated) = secondary_chain(&primaries, &hamiltonian, m, opts)?;
    let mut all = primaries.clone();
    all.extend(secondaries.iter().flatten().cloned());
    let (x_matrix, class) = classify(&all, m, opts)?;
    Ok(CanAnalysis {
        uhat,
        free_functions,
        user_solution,
        primaries,
        hamiltonian,
        secondaries,
        multiplier_conditions,
        chain_terminated,
        x_matrix,
        class,
    })
}
