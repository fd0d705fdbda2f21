//! Lagrangian transformations: integrability, the variation of the
//! Lagrangian, semi-gauge checks and pull-backs of canonical generators.

use crate::brackets::poisson;
use crate::canonical::pullback;
use crate::expr::{Expr, Ideal, Symbol};
use crate::lagrangian::LagAnalysis;
use crate::model::Model;
use crate::{Error, Result};

/// `delta q^A = eps^A(q, u)` with its associated function `E`.
#[derive(Clone, Debug)]
pub struct LagTransform {
    pub eps: Vec<Expr>,
    pub e: Option<Expr>,
}

/// Integrability: `M_AC deps^C/du^B - M_BC deps^C/du^A = 0` for all `A, B`.
pub fn check_ltr(eps: &[Expr], m: &Model, la: &LagAnalysis) -> bool {
    let n = m.n();
    let deps: Vec<Vec<Expr>> = eps.iter().map(|e| m.velocities.iter().map(|u| e.diff(u)).collect()).collect();
    let contract = |a: usize, b: usize| -> Expr { (0..n).map(|c| &la.m[a][c] * &deps[c][b]).sum() };
    for a in 0..n {
        for b in a + 1..n {
            if !(&contract(a, b) - &contract(b, a)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// `dE/du^B = W_A deps^A/du^B` for all `B`.
pub fn associated_function_holds(eps: &[Expr], e: &Expr, m: &Model, la: &LagAnalysis) -> bool {
    m.velocities.iter().all(|u| {
        let rhs: Expr = la.w.iter().zip(eps).map(|(w, x)| w * &x.diff(u)).sum();
        (&e.diff(u) - &rhs).is_zero()
    })
}

/// The given `E` after verification, or `0` when the transformation does not
/// depend on velocities.
fn resolve_e(eps: &[Expr], e: Option<&Expr>, m: &Model, la: &LagAnalysis) -> Result<Expr> {
    let e = e.cloned().unwrap_or_else(Expr::zero);
    if associated_function_holds(eps, &e, m, la) {
        Ok(e)
    } else {
        let shown: Vec<String> = eps.iter().map(|x| x.to_string()).collect();
        Err(Error::AssociatedFunctionMissing(format!("({})", shown.join(", "))))
    }
}

/// `Delta L = dL/dq^A eps^A + (W_A deps^A/dq^B - dE/dq^B) u^B`, parameters held
/// constant.
pub fn delta_l(eps: &[Expr], e: Option<&Expr>, m: &Model, la: &LagAnalysis) -> Result<Expr> {
    let e = resolve_e(eps, e, m, la)?;
    let mut out: Expr = m.coords.iter().zip(eps).map(|(q, x)| &m.lagrangian.diff(q) * x).sum();
    for (qb, ub) in m.coords.iter().zip(&m.velocities) {
        let inner: Expr = la.w.iter().zip(eps).map(|(w, x)| w * &x.diff(qb)).sum();
        let coeff = &inner - &e.diff(qb);
        out = &out + &(&coeff * &Expr::sym(ub));
    }
    Ok(out)
}

/// [`delta_l`] for parameters that depend on time: adds
/// `W_A d(eps^A)/dtau - dE/dtau`.
pub fn delta_l_explicit_tau(eps: &[Expr], e: Option<&Expr>, m: &Model, la: &LagAnalysis) -> Result<Expr> {
    let base = delta_l(eps, e, m, la)?;
    let t = Symbol::time();
    let we: Expr = la.w.iter().zip(eps).map(|(w, x)| w * &x.diff(&t)).sum();
    let de = e.map(|e| e.diff(&t)).unwrap_or_else(Expr::zero);
    Ok(&(&base + &we) - &de)
}

/// Semi-gauge: `Delta L` vanishes modulo the Lagrangian constraints.
pub fn is_sgtr(dl: &Expr, la: &LagAnalysis, cap: u32) -> Result<bool> {
    Ideal::new(&la.all_constraints(), cap).contains(dl)
}

/// Lagrangian transformation induced by the generator `Q`:
/// `eps^A = {q^A, Q}` and `E = pi_A {q^A, Q} - Q`, both at `pi = W`.
pub fn pullback_htr(q: &Expr, m: &Model, la: &LagAnalysis) -> Result<LagTransform> {
    let eps_hat: Vec<Expr> = m.coords.iter().map(|c| poisson(&Expr::sym(c), q, m)).collect();
    let e_hat = &m.momenta.iter().zip(&eps_hat).map(|(p, x)| &Expr::sym(p) * x).sum::<Expr>() - q;
    let eps: Vec<Expr> = eps_hat.iter().map(|x| pullback(x, m, la)).collect();
    let e = pullback(&e_hat, m, la);
    if !check_ltr(&eps, m, la) || !associated_function_holds(&eps, &e, m, la) {
        return Err(Error::VerificationFailed(format!("pull-back of {q} is not a Lagrangian transformation")));
    }
    Ok(LagTransform { eps, e: Some(e) })
}
