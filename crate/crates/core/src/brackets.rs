//! Poisson, M- and EM-brackets.
//!
//! Parameters, unknowns and auxiliaries carry no phase-space dependence, so
//! every bracket treats them as constants.

use crate::canonical::CanAnalysis;
use crate::expr::{Expr, Ideal};
use crate::lagrangian::LagAnalysis;
use crate::linalg::Matrix;
use crate::model::Model;
use crate::Result;

/// `{F, G} = dF/dq^A dG/dpi_A - dF/dpi_A dG/dq^A`.
pub fn poisson(f: &Expr, g: &Expr, m: &Model) -> Expr {
    let mut out = Expr::zero();
    for (q, p) in m.coords.iter().zip(&m.momenta) {
        let fq = f.diff(q);
        if !fq.is_zero() {
            let gp = g.diff(p);
            if !gp.is_zero() {
                out = &out + &(&fq * &gp);
            }
        }
        let fp = f.diff(p);
        if !fp.is_zero() {
            let gq = g.diff(q);
            if !gq.is_zero() {
                out = &out - &(&fp * &gq);
            }
        }
    }
    out
}

/// Hessian evaluated on the velocity solution, shared by the M- and
/// EM-brackets.
#[derive(Clone, Debug)]
pub struct BracketContext<'a> {
    pub model: &'a Model,
    pub uhat: Vec<Expr>,
    pub m_hat: Matrix,
}

impl<'a> BracketContext<'a> {
    pub fn new(model: &'a Model, la: &LagAnalysis, can: &CanAnalysis) -> Self {
        let sub = model.velocity_map(&can.uhat);
        let m_hat = la.m.iter().map(|row| row.iter().map(|e| e.substitute(&sub)).collect()).collect();
        BracketContext { model, uhat: can.uhat.clone(), m_hat }
    }

    /// Context with an explicit matrix in place of the Hessian.
    pub fn with_matrix(model: &'a Model, uhat: Vec<Expr>, m_hat: Matrix) -> Self {
        BracketContext { model, uhat, m_hat }
    }

    fn momentum_gradient(&self, f: &Expr) -> Vec<Expr> {
        self.model.momenta.iter().map(|p| f.diff(p)).collect()
    }

    /// Contracts two momentum gradients with the Hessian.
    fn contract(&self, a: &[Expr], b: &[Expr]) -> Expr {
        let mut out = Expr::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let mij = &self.m_hat[i][j];
                if bj.is_zero() || mij.is_zero() {
                    continue;
                }
                out = &out + &(&(mij * ai) * bj);
            }
        }
        out
    }

    /// `{F, G}_M = M_AB(q, U) dF/dpi_A dG/dpi_B`.
    pub fn m_bracket(&self, f: &Expr, g: &Expr) -> Expr {
        self.contract(&self.momentum_gradient(f), &self.momentum_gradient(g))
    }

    /// `{U^B, G}_M` for every `B`; shared by all EM-brackets with second
    /// argument `G`.
    pub fn em_inner(&self, g: &Expr) -> Vec<Expr> {
        self.uhat.iter().map(|u| self.m_bracket(u, g)).collect()
    }

    /// `{F, G}_EM = M_AB(q, U) dF/dpi_A {U^B, G}_M`.
    pub fn em_bracket(&self, f: &Expr, g: &Expr) -> Expr {
        if self.momentum_gradient(f).iter().all(Expr::is_zero) {
            return Expr::zero();
        }
        self.em_bracket_with(f, &self.em_inner(g))
    }

    /// [`em_bracket`](Self::em_bracket) with a precomputed [`em_inner`](Self::em_inner).
    pub fn em_bracket_with(&self, f: &Expr, inner: &[Expr]) -> Expr {
        self.contract(&self.momentum_gradient(f), inner)
    }
}

/// Class IA: all pairwise Poisson and M-brackets vanish modulo the
/// constraints. Returns the reduced M-bracket table alongside.
pub fn is_class_ia(ctx: &BracketContext<'_>, constraints: &[Expr], cap: u32) -> Result<(bool, Matrix)> {
    let ideal = Ideal::new(constraints, cap);
    let n = constraints.len();
    let mut table = vec![vec![Expr::zero(); n]; n];
    let mut closed = true;
    for i in 0..n {
        for j in i..n {
            let r = ideal.reduce(&ctx.m_bracket(&constraints[i], &constraints[j]))?;
            closed &= r.is_zero();
            if j > i {
                closed &= ideal.contains(&poisson(&constraints[i], &constraints[j], ctx.model))?;
            }
            table[i][j] = r.clone();
            table[j][i] = r;
        }
    }
    Ok((closed, table))
}
