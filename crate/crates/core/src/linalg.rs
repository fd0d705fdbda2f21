//! Gauss-Jordan elimination over the field of rational functions.

use crate::expr::{Assumptions, Expr};
use crate::{Error, Result};

pub type Matrix = Vec<Vec<Expr>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Expr::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Expr::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Expr]) -> Vec<Expr> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Pivot preference: tier, then degree, then size, then position.
type PivotKey = (PivotTier, u32, usize, usize, usize);

/// How a pivot's nonvanishing was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PivotTier {
    /// A nonzero rational constant.
    Constant,
    /// A monomial in symbols assumed nonzero.
    Assumed,
    /// Nonzero as a rational function only; recorded as a genericity assumption.
    Generic,
}

/// Result of reducing `Q M C` to `[[1, N], [0, 0]]`.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub rank: usize,
    /// Regular row-operation matrix.
    pub q: Matrix,
    /// Column order: `c_perm[i]` is the original column placed at position `i`.
    pub c_perm: Vec<usize>,
    /// The `R x (N-R)` block next to the identity.
    pub n_block: Matrix,
    /// Pivots accepted only generically.
    pub generic_pivots: Vec<Expr>,
}

fn tier(e: &Expr, a: &Assumptions) -> Option<PivotTier> {
    if e.is_zero() {
        None
    } else if e.is_constant() {
        Some(PivotTier::Constant)
    } else if a.expr_is_nonzero(e) {
        Some(PivotTier::Assumed)
    } else {
        Some(PivotTier::Generic)
    }
}

/// Sweep-out with pivots preferred by tier, then by total degree and size, then
/// by position. With `strict`, a generic pivot is an error.
pub fn sweep_out(m: &Matrix, a: &Assumptions, strict: bool) -> Result<Sweep> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..rows).map(|j| if i == j { Expr::one() } else { Expr::zero() }));
            r
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut generic = Vec::new();
    loop {
        let mut best: Option<(PivotKey, usize, usize)> = None;
        for (r, row) in aug.iter().enumerate() {
            if pivots.iter().any(|p| p.0 == r) {
                continue;
            }
            for (c, e) in row.iter().take(cols).enumerate() {
                if pivots.iter().any(|p| p.1 == c) {
                    continue;
                }
                let Some(t) = tier(e, a) else { continue };
                let key = (t, e.total_degree(), e.numerator().len() + e.denominator_factors().len(), r, c);
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, r, c));
                }
            }
        }
        let Some(((t, ..), r, c)) = best else { break };
        let p = aug[r][c].clone();
        if t == PivotTier::Generic {
            if strict {
                return Err(Error::PivotUndecidable(p.to_string()));
            }
            generic.push(p.clone());
        }
        let inv = p.recip()?;
        aug[r] = aug[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows {
            if i == r || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            let pivot_row = aug[r].clone();
            for (x, y) in aug[i].iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push((r, c));
    }
    let rank = pivots.len();
    let mut order: Vec<usize> = pivots.iter().map(|p| p.0).collect();
    order.extend((0..rows).filter(|r| !pivots.iter().any(|p| p.0 == *r)));
    let mut c_perm: Vec<usize> = pivots.iter().map(|p| p.1).collect();
    c_perm.extend((0..cols).filter(|c| !pivots.iter().any(|p| p.1 == *c)));
    let q: Matrix = order.iter().map(|&r| aug[r][cols..].to_vec()).collect();
    let n_block: Matrix = pivots.iter().map(|&(r, _)| c_perm[rank..].iter().map(|&c| aug[r][c].clone()).collect()).collect();
    Ok(Sweep { rank, q, c_perm, n_block, generic_pivots: generic })
}

/// Inverse of a square matrix.
pub fn inverse(m: &Matrix, a: &Assumptions) -> Result<Matrix> {
    let s = sweep_out(m, a, false)?;
    let n = m.len();
    if s.rank < n {
        return Err(Error::XNotInvertible);
    }
    let mut inv = zeros(n, n);
    for (i, &c) in s.c_perm.iter().enumerate() {
        inv[c] = s.q[i].clone();
    }
    Ok(inv)
}

/// Solves `A x = b`. Returns one particular solution with free unknowns set to
/// zero together with the number of free unknowns, or `None` when inconsistent.
pub fn solve(a: &Matrix, b: &[Expr], asm: &Assumptions) -> Result<Option<(Vec<Expr>, usize)>> {
    let s = sweep_out(a, asm, false)?;
    let qb = mat_vec(&s.q, b);
    if qb[s.rank..].iter().any(|x| !x.is_zero()) {
        return Ok(None);
    }
    let cols = a.first().map_or(0, Vec::len);
    let mut x = vec![Expr::zero(); cols];
    for i in 0..s.rank {
        x[s.c_perm[i]] = qb[i].clone();
    }
    Ok(Some((x, cols - s.rank)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Symbol;

    fn sym(n: &str, i: usize) -> Expr {
        Expr::sym(&Symbol::velocity(n, i))
    }

    #[test]
    fn block_form_holds() {
        let m = vec![
            vec![Expr::zero(), Expr::one(), Expr::zero()],
            vec![Expr::one(), Expr::zero(), Expr::zero()],
            vec![Expr::zero(), Expr::zero(), Expr::zero()],
        ];
        let s = sweep_out(&m, &Assumptions::new(), true).unwrap();
        assert_eq!(s.rank, 2);
        assert_eq!(s.q[2], vec![Expr::zero(), Expr::zero(), Expr::one()]);
        let qm = mat_mul(&s.q, &m);
        for (i, row) in qm.iter().enumerate() {
            for (j, &c) in s.c_perm.iter().enumerate() {
                let want = if i == j && i < s.rank { Expr::one() } else { Expr::zero() };
                assert!((&row[c] - &want).is_zero());
            }
        }
    }

    #[test]
    fn generic_pivot_rejected_when_strict() {
        let u = sym("u1", 1);
        let m = vec![vec![u.clone()]];
        assert!(matches!(sweep_out(&m, &Assumptions::new(), true), Err(Error::PivotUndecidable(_))));
        assert_eq!(sweep_out(&m, &Assumptions::new(), false).unwrap().generic_pivots, vec![u]);
    }

    #[test]
    fn inverse_of_antisymmetric() {
        let m = vec![vec![Expr::zero(), Expr::int(-2)], vec![Expr::int(2), Expr::zero()]];
        let inv = inverse(&m, &Assumptions::new()).unwrap();
        let prod = mat_mul(&m, &inv);
        assert_eq!(prod, identity(2));
    }
}
