//! Euler-Lagrange decomposition, Hessian sweep-out and the Lagrangian
//! constraint chain.

use crate::expr::{constraint_form, Expr, Ideal, Symbol};
use crate::linalg::{mat_vec, sweep_out, Matrix};
use crate::model::Model;
use crate::{Options, Result};

/// Outcome of propagating one constraint with the chain operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LcStatus {
    /// Vanishes modulo earlier constraints.
    Identity,
    /// A new relation on `(q, u)`.
    NewConstraint,
    /// Depends on the arbitrary accelerations: a condition on `v`, which
    /// signals second class constraints.
    SecondClassSignature,
}

#[derive(Clone, Debug)]
pub struct LcEntry {
    pub expr: Expr,
    pub status: LcStatus,
}

#[derive(Clone, Debug)]
pub struct LagAnalysis {
    pub w: Vec<Expr>,
    pub m: Matrix,
    pub omega: Vec<Expr>,
    pub rank: usize,
    pub qmat: Matrix,
    pub c_perm: Vec<usize>,
    pub n_block: Matrix,
    /// Null vectors `z^(m)`, the last `N - R` rows of `qmat`.
    pub z: Vec<Vec<Expr>>,
    /// Coordinate positions of the null directions, `c_perm[R..]`.
    pub null_positions: Vec<usize>,
    pub generic_pivots: Vec<Expr>,
    /// Accelerations `udot^A` with arbitrary functions `v^m`.
    pub udot: Vec<Expr>,
    pub arbitrary: Vec<Symbol>,
    /// Levels starting at order one.
    pub lc_chain: Vec<Vec<LcEntry>>,
    pub chain_terminated: bool,
}

impl LagAnalysis {
    /// Accepted constraints of each level.
    pub fn constraint_levels(&self) -> Vec<Vec<Expr>> {
        self.lc_chain
            .iter()
            .map(|l| l.iter().filter(|e| e.status == LcStatus::NewConstraint).map(|e| e.expr.clone()).collect())
            .filter(|l: &Vec<Expr>| !l.is_empty())
            .collect()
    }

    pub fn all_constraints(&self) -> Vec<Expr> {
        self.constraint_levels().into_iter().flatten().collect()
    }

    pub fn has_second_class_signature(&self) -> bool {
        self.lc_chain.iter().flatten().any(|e| e.status == LcStatus::SecondClassSignature)
    }
}

/// `W_A = dL/du^A`, `M_AB = dW_A/du^B`, `omega_A = (dW_A/dq^B) u^B - dL/dq^A`.
pub fn ele_decompose(m: &Model) -> (Vec<Expr>, Matrix, Vec<Expr>) {
    let w: Vec<Expr> = m.velocities.iter().map(|u| m.lagrangian.diff(u)).collect();
    let hess: Matrix = w.iter().map(|wa| m.velocities.iter().map(|u| wa.diff(u)).collect()).collect();
    let omega = w
        .iter()
        .zip(&m.coords)
        .map(|(wa, qa)| {
            let transport: Expr = m.coords.iter().zip(&m.velocities).map(|(qb, ub)| &wa.diff(qb) * &Expr::sym(ub)).sum();
            &transport - &m.lagrangian.diff(qa)
        })
        .collect();
    (w, hess, omega)
}

/// General solution of `M udot + omega = 0`: `udot^a = -N^a_m v^m - Q^aB omega_B`
/// on pivot directions and `udot^m = v^m` on null directions.
pub fn general_velocity_solution(
    qmat: &Matrix,
    c_perm: &[usize],
    n_block: &Matrix,
    rank: usize,
    omega: &[Expr],
) -> (Vec<Expr>, Vec<Symbol>) {
    let n = omega.len();
    let qw = mat_vec(qmat, omega);
    let arbitrary: Vec<Symbol> = c_perm[rank..].iter().map(|&c| Symbol::arbitrary(c + 1)).collect();
    let mut udot = vec![Expr::zero(); n];
    for a in 0..rank {
        let hom: Expr = n_block[a].iter().zip(&arbitrary).map(|(nm, v)| nm * &Expr::sym(v)).sum();
        udot[c_perm[a]] = -(&hom + &qw[a]);
    }
    for (k, v) in arbitrary.iter().enumerate() {
        udot[c_perm[rank + k]] = Expr::sym(v);
    }
    (udot, arbitrary)
}

/// Chain operator `D = u^A d/dq^A + udot^A d/du^A`.
pub fn chain_operator(f: &Expr, m: &Model, udot: &[Expr]) -> Expr {
    let mut out = Expr::zero();
    for ((q, u), ud) in m.coords.iter().zip(&m.velocities).zip(udot) {
        let dq = f.diff(q);
        if !dq.is_zero() {
            out = &out + &(&dq * &Expr::sym(u));
        }
        let du = f.diff(u);
        if !du.is_zero() {
            out = &out + &(&du * ud);
        }
    }
    out
}

/// Keeps candidates that do not reduce to zero modulo `earlier` and the
/// candidates accepted before them.
pub fn independence_filter(cands: &[Expr], earlier: &[Expr], cap: u32) -> Result<Vec<Expr>> {
    let mut accepted: Vec<Expr> = Vec::new();
    for c in cands {
        if c.is_zero() {
            continue;
        }
        let mut gens = earlier.to_vec();
        gens.extend(accepted.iter().cloned());
        if !Ideal::new(&gens, cap).contains(c)? {
            accepted.push(c.clone());
        }
    }
    Ok(accepted)
}

/// Runs the full Lagrangian analysis.
pub fn analyze(m: &Model, opts: &Options) -> Result<LagAnalysis> {
    let (w, hess, omega) = ele_decompose(m);
    let sw = sweep_out(&hess, &m.assumptions, opts.strict_pivots)?;
    let rank = sw.rank;
    let z: Vec<Vec<Expr>> = sw.q[rank..].to_vec();
    let (udot, arbitrary) = general_velocity_solution(&sw.q, &sw.c_perm, &sw.n_block, rank, &omega);
    let mut la = LagAnalysis {
        w,
        m: hess,
        omega,
        rank,
        qmat: sw.q.clone(),
        null_positions: sw.c_perm[rank..].to_vec(),
        c_perm: sw.c_perm,
        n_block: sw.n_block,
        z,
        generic_pivots: sw.generic_pivots,
        udot,
        arbitrary,
        lc_chain: Vec::new(),
        chain_terminated: true,
    };
    let (chain, done) = lc_chain(&la, m, opts)?;
    la.lc_chain = chain;
    la.chain_terminated = done;
    Ok(la)
}

/// Builds the constraint chain. Returns the levels and whether it terminated
/// within the order limit.
pub fn lc_chain(la: &LagAnalysis, m: &Model, opts: &Options) -> Result<(Vec<Vec<LcEntry>>, bool)> {
    let max_order = opts.max_order.unwrap_or(m.max_chain_order);
    let a = &m.assumptions;
    let cap = opts.degree_cap;
    let is_arbitrary = |e: &Expr| e.contains_where(|s| la.arbitrary.contains(s));
    let mut levels: Vec<Vec<LcEntry>> = Vec::new();
    let mut known: Vec<Expr> = Vec::new();
    let mut frontier: Vec<Expr> = la.z.iter().map(|z| z.iter().zip(&la.omega).map(|(x, y)| x * y).sum()).collect();
    for _order in 1..=max_order {
        let ideal = Ideal::new(&known, cap);
        let mut level = Vec::new();
        let mut accepted: Vec<Expr> = Vec::new();
        for cand in &frontier {
            let r = ideal.reduce(cand)?;
            if r.is_zero() {
                level.push(LcEntry { expr: cand.clone(), status: LcStatus::Identity });
                continue;
            }
            if is_arbitrary(&r) {
                level.push(LcEntry { expr: constraint_form(&r, a), status: LcStatus::SecondClassSignature });
                continue;
            }
            let form = constraint_form(&r, a);
            let mut gens = known.clone();
            gens.extend(accepted.iter().cloned());
            if Ideal::new(&gens, cap).contains(&form)? {
                level.push(LcEntry { expr: form, status: LcStatus::Identity });
            } else {
                accepted.push(form.clone());
                level.push(LcEntry { expr: form, status: LcStatus::NewConstraint });
            }
        }
        levels.push(level);
        if accepted.is_empty() {
            return Ok((levels, true));
        }
        frontier = accepted.iter().map(|l| chain_operator(l, m, &la.udot)).collect();
        known.extend(accepted);
    }
    Ok((levels, false))
}
