//! Generators built from first class constraints, their time development and
//! the decision whether each one maps solutions to physically equivalent ones.

use std::collections::HashMap;

use crate::brackets::{is_class_ia, poisson, BracketContext};
use crate::canonical::{tilde, CanAnalysis};
use crate::expr::{constraint_form, divide, Assumptions, Expr, Ideal, Kind, Symbol};
use crate::lagrangian::LagAnalysis;
use crate::linalg::Matrix;
use crate::model::Model;
use crate::{Error, Options, Result};

/// `Q = sum eta_n phi_n + sum w_i eps_i chi_i` with one parameter per constraint.
#[derive(Clone, Debug)]
pub struct DtrGenerator {
    pub q: Expr,
    pub params: Vec<Symbol>,
}

/// One labelled residual row.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub label: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    /// Every generator of the family is physically equivalent.
    PetrAll,
    /// Equivalent except where all the listed parameter expressions vanish.
    PetrExcept { locus: Vec<Expr> },
    /// A residual that no choice of `xi` or `Xi` removes.
    NotPetr { witness: Expr, row: String },
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::PetrAll => "PETR_ALL",
            Verdict::PetrExcept { .. } => "PETR_EXCEPT",
            Verdict::NotPetr { .. } => "NOT_PETR",
            Verdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub dtr: DtrGenerator,
    pub class_ia: bool,
    /// Reduced pairwise M-brackets of all constraints.
    pub ia_table: Matrix,
    /// `Q~ mod phi` as coefficients of the secondaries (and of radicals that
    /// vanish on the constraint surface). Empty when the split failed.
    pub qtilde: Vec<(Expr, Expr)>,
    pub cond1: Vec<Residual>,
    pub cond2: Vec<Residual>,
    /// Coefficients of the unphysical momenta added to `Q`.
    pub xi: Vec<(Symbol, Expr)>,
    /// Condition on the stand-ins for the unphysical coordinates.
    pub xi_equation: Option<Expr>,
    pub verdict: Verdict,
    /// Equations `c = 0` that make `Q` a canonical gauge generator.
    pub cgtr_family: Vec<Expr>,
}

fn numbered(base: &str, k: usize, count: usize) -> String {
    if count == 1 {
        base.to_string()
    } else {
        format!("{base}{k}")
    }
}

/// Builds the generator of the model's first class constraints. Names and
/// weights come from the model's `dtr` lines, otherwise `eta`/`eps` numbered
/// in discovery order.
pub fn build_dtr(m: &Model, can: &CanAnalysis) -> Result<DtrGenerator> {
    if !can.is_first_class() {
        return Err(Error::SecondClassPresent);
    }
    let mut q = Expr::zero();
    let mut params = Vec::new();
    let np = can.primaries.len();
    for (k, phi) in can.primaries.iter().enumerate() {
        let p = Symbol::param(&numbered("eta", k + 1, np), 0);
        q = &q + &(&Expr::sym(&p) * phi);
        params.push(p);
    }
    let ns: usize = can.secondaries.iter().map(Vec::len).sum();
    let mut flat = 0;
    for (l, level) in can.secondaries.iter().enumerate() {
        for (i, chi) in level.iter().enumerate() {
            flat += 1;
            let spec = m.dtr.iter().find(|d| d.level == l + 1 && d.position == i + 1);
            let name = spec.map_or_else(|| numbered("eps", flat, ns), |d| d.name.clone());
            let p = Symbol::param(&name, 0);
            let mut term = &Expr::sym(&p) * chi;
            if let Some(w) = spec.and_then(|d| d.weight.as_ref()) {
                term = &term * w;
            }
            q = &q + &term;
            params.push(p);
        }
    }
    Ok(DtrGenerator { q, params })
}

/// Radicals occurring in `e` whose radicand vanishes on the constraint surface.
fn vanishing_radicals(e: &Expr, all: &Ideal) -> Result<Vec<Expr>> {
    let mut out = Vec::new();
    for s in e.symbols() {
        if let Kind::Radical { base, .. } = s.kind() {
            if all.contains_poly(base)? {
                out.push(Expr::sym(&s));
            }
        }
    }
    Ok(out)
}

/// Writes `Q~ mod phi` as a combination of the secondaries, then of radicals
/// vanishing on the constraint surface. Coefficients may themselves contain
/// constraints.
pub fn q_tilde_decompose(q: &Expr, m: &Model, can: &CanAnalysis, cap: u32) -> Result<Vec<(Expr, Expr)>> {
    let r = Ideal::new(&can.primaries, cap).reduce(&tilde(q, &can.hamiltonian, m))?;
    let all = Ideal::new(&can.all_constraints(), cap);
    let secondaries = can.secondary_flat();
    let mut gens = secondaries.clone();
    gens.extend(vanishing_radicals(&r, &all)?);
    let divisors: Vec<_> = gens.iter().map(|g| g.numerator().clone()).collect();
    let (quots, rem) = divide(r.numerator(), &divisors);
    if !rem.is_zero() {
        return Err(Error::DecompositionFailed(r.to_string()));
    }
    let den = Expr::from_polys(crate::Poly::one(), r.denominator())?;
    Ok(gens
        .into_iter()
        .zip(quots)
        .enumerate()
        .filter(|(i, (_, c))| *i < secondaries.len() || !c.is_zero())
        .map(|(_, (g, c))| (g, &Expr::from_poly(c) * &den))
        .collect())
}

/// Canonical gauge generator: `Q~ = 0 mod phi`.
pub fn is_cgtr(q: &Expr, m: &Model, can: &CanAnalysis, cap: u32) -> Result<bool> {
    Ideal::new(&can.primaries, cap).contains(&tilde(q, &can.hamiltonian, m))
}

/// The `Q~` coefficients modulo the constraints; the generator is a canonical
/// gauge generator exactly when they all vanish.
pub fn cgtr_family(q: &Expr, m: &Model, can: &CanAnalysis, cap: u32) -> Result<Vec<Expr>> {
    let all = Ideal::new(&can.all_constraints(), cap);
    q_tilde_decompose(q, m, can, cap)?.iter().map(|(_, c)| all.reduce(c)).collect()
}

/// Both preservation conditions for the generator `qhat`, reduced modulo all
/// constraints: one row per secondary, then one row per momentum.
pub fn residual_rows(
    qhat: &Expr,
    ctx: &BracketContext<'_>,
    can: &CanAnalysis,
    all: &Ideal,
) -> Result<(Vec<Residual>, Vec<Residual>)> {
    let m = ctx.model;
    let h = &can.hamiltonian;
    let qt = tilde(qhat, h, m);
    let mut cond1 = Vec::new();
    for chi in can.secondary_flat() {
        let r = &poisson(&chi, qhat, m) + &ctx.m_bracket(&chi, &qt);
        cond1.push(Residual { label: chi.to_string(), expr: all.reduce(&r)? });
    }
    // Once the chain has closed, the time development maps the constraint
    // ideal into itself, so the M-bracket may be reduced before it is applied.
    let closed = can.chain_terminated && can.multiplier_conditions.is_empty();
    let inner = ctx.em_inner(&qt);
    let mut cond2 = Vec::new();
    for p in &m.momenta {
        let pe = Expr::sym(p);
        let mut mb = ctx.m_bracket(&pe, &qt);
        if closed {
            mb = all.reduce(&mb)?;
        }
        let em = ctx.em_bracket_with(&tilde(&pe, h, m), &inner);
        let r = &(&poisson(&pe, &qt, m) + &tilde(&mb, h, m)) - &em;
        cond2.push(Residual { label: p.name().to_string(), expr: all.reduce(&r)? });
    }
    Ok((cond1, cond2))
}

fn all_zero(rows: &[Residual]) -> bool {
    rows.iter().all(|r| r.expr.is_zero())
}

fn is_unknown(s: &Symbol) -> bool {
    matches!(s.kind(), Kind::Unknown { .. })
}

fn is_aux(s: &Symbol) -> bool {
    matches!(s.kind(), Kind::Aux { .. })
}

/// Unphysical directions with their momenta, the `xi` unknowns and the
/// substitution that replaces their coordinates and velocities by `Xi`, `Xi~`.
struct Unphysical {
    momenta: Vec<Expr>,
    xi: Vec<Symbol>,
    xi_subs: HashMap<Symbol, Expr>,
    /// Model assumptions, with each `Xi` inheriting those of its coordinate.
    assumptions: Assumptions,
}

fn unphysical(m: &Model, la: &LagAnalysis, can: &CanAnalysis) -> Unphysical {
    let n = la.null_positions.len();
    let mut out = Unphysical {
        momenta: Vec::new(),
        xi: Vec::new(),
        xi_subs: HashMap::new(),
        assumptions: m.assumptions.clone(),
    };
    for (k, &pos) in la.null_positions.iter().enumerate() {
        out.momenta.push(Expr::sym(&m.momenta[pos]));
        out.xi.push(Symbol::unknown(&numbered("xi", k + 1, n), 0));
        let big = numbered("Xi", k + 1, n);
        let stand_in = Symbol::aux(&big, 0);
        let props: Vec<_> = m.assumptions.iter().filter(|a| a.symbol == m.coords[pos]).map(|a| a.property).collect();
        for p in props {
            out.assumptions.insert(stand_in.clone(), p);
        }
        out.xi_subs.insert(m.coords[pos].clone(), Expr::sym(&stand_in));
        if let [s] = can.uhat[pos].symbols().as_slice() {
            if Expr::sym(s) == can.uhat[pos] && matches!(s.kind(), Kind::FreeFn(_)) {
                out.xi_subs.insert(s.clone(), Expr::sym(&Symbol::aux(&big, 1)));
            }
        }
    }
    out
}

/// `Q + sum xi_m pi_m`.
fn with_xi(q: &Expr, un: &Unphysical, xi: &[Expr]) -> Expr {
    un.momenta.iter().zip(xi).fold(q.clone(), |acc, (p, x)| &acc + &(x * p))
}

/// For each unphysical momentum whose time development is `lambda * chi_i`
/// modulo the primaries, the `xi` cancelling the `chi_i` term of `Q~`.
fn xi_candidate(
    un: &Unphysical,
    m: &Model,
    can: &CanAnalysis,
    qtilde: &[(Expr, Expr)],
    all: &Ideal,
    cap: u32,
) -> Result<Vec<Expr>> {
    let phi = Ideal::new(&can.primaries, cap);
    let secondaries = can.secondary_flat();
    let mut out = Vec::new();
    for p in &un.momenta {
        let t = phi.reduce(&tilde(p, &can.hamiltonian, m))?;
        let mut pick = Expr::zero();
        if !t.is_zero() {
            for (chi, coef) in qtilde.iter().filter(|(g, _)| secondaries.contains(g)) {
                let lambda = t.checked_div(chi)?;
                if lambda.contains_where(|s| !s.is_parameter_like()) {
                    continue;
                }
                pick = -&all.reduce(coef)?.checked_div(&lambda)?;
                break;
            }
        }
        out.push(pick);
    }
    Ok(out)
}

/// Residual rows after replacing the unphysical coordinates by `Xi`, with
/// the rows that stayed nonzero.
fn xi_stage(rows: &[Residual], un: &Unphysical, all: &Ideal) -> Result<Vec<Expr>> {
    let mut out = Vec::new();
    for r in rows {
        let e = all.reduce(&r.expr.substitute(&un.xi_subs))?;
        if !e.is_zero() {
            out.push(e);
        }
    }
    Ok(out)
}

/// Whether one condition `g(Xi, eps) = 0` on the `Xi` accounts for every
/// remaining residual, and where in parameter space it cannot be met.
fn extended_verdict(rows: &[Expr], asm: &Assumptions, cap: u32) -> Result<(Verdict, Option<Expr>)> {
    let mut coeffs: Vec<Expr> = Vec::new();
    for r in rows {
        for (_, c) in r.numerator_expr().collect_by(|s| !s.is_parameter_like()) {
            let c = constraint_form(&c, asm);
            if !c.is_zero() && !coeffs.contains(&c) {
                coeffs.push(c);
            }
        }
    }
    let Some(g) = coeffs
        .iter()
        .min_by_key(|c| (c.numerator().len(), c.total_degree(), c.to_string()))
        .cloned()
    else {
        return Ok((Verdict::PetrAll, None));
    };
    if !g.contains_where(is_aux) {
        return Ok((Verdict::Inconclusive(format!("parameter condition {g} = 0 remains")), None));
    }
    let ideal = Ideal::new(&[g.clone(), g.diff(&Symbol::time())], cap);
    for c in &coeffs {
        if !ideal.contains(c)? {
            return Ok((Verdict::Inconclusive(format!("residual {c} is not fixed by {g} = 0")), Some(g)));
        }
    }
    let mut locus: Vec<Expr> = Vec::new();
    for (mono, c) in g.collect_by(is_aux) {
        if mono.is_one() {
            continue;
        }
        let c = constraint_form(&c, asm);
        let c = if c.to_string().starts_with('-') { -c } else { c };
        if !c.is_constant() && !locus.contains(&c) {
            locus.push(c);
        }
    }
    Ok((Verdict::PetrExcept { locus }, Some(g)))
}

/// Decides whether the generator of the first class constraints, completed by
/// `xi` terms along the unphysical momenta, preserves the Lagrangian
/// constraints and the equations of motion.
pub fn petr_check(m: &Model, la: &LagAnalysis, can: &CanAnalysis, opts: &Options) -> Result<ConjectureReport> {
    petr_check_generator(build_dtr(m, can)?, m, la, can, opts)
}

/// [`petr_check`] for a given generator, for instance one whose parameters
/// are already tied together.
pub fn petr_check_generator(
    dtr: DtrGenerator,
    m: &Model,
    la: &LagAnalysis,
    can: &CanAnalysis,
    opts: &Options,
) -> Result<ConjectureReport> {
    if !can.is_first_class() {
        return Err(Error::SecondClassPresent);
    }
    let cap = opts.degree_cap;
    let constraints = can.all_constraints();
    let all = Ideal::new(&constraints, cap);
    let ctx = BracketContext::new(m, la, can);
    let (class_ia, ia_table) = is_class_ia(&ctx, &constraints, cap)?;
    let un = unphysical(m, la, can);
    let mut report = ConjectureReport {
        dtr: dtr.clone(),
        class_ia,
        ia_table,
        qtilde: Vec::new(),
        cond1: Vec::new(),
        cond2: Vec::new(),
        xi: Vec::new(),
        xi_equation: None,
        verdict: Verdict::PetrAll,
        cgtr_family: Vec::new(),
    };
    match q_tilde_decompose(&dtr.q, m, can, cap) {
        Ok(t) => report.qtilde = t,
        Err(e @ Error::DecompositionFailed(_)) => {
            report.verdict = Verdict::Inconclusive(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    }
    for (_, c) in &report.qtilde {
        report.cgtr_family.push(all.reduce(c)?);
    }

    let generic: Vec<Expr> = un.xi.iter().map(Expr::sym).collect();
    let (c1, c2) = residual_rows(&with_xi(&dtr.q, &un, &generic), &ctx, can, &all)?;
    report.cond1 = c1;
    report.cond2 = c2;
    if all_zero(&report.cond1) && all_zero(&report.cond2) {
        return Ok(report);
    }
    for r in report.cond1.iter().chain(&report.cond2) {
        if r.expr.is_zero() || r.expr.contains_where(is_unknown) {
            continue;
        }
        let w = all.reduce(&r.expr.substitute(&un.xi_subs))?;
        if !w.is_zero() && !w.contains_where(is_aux) {
            report.verdict = Verdict::NotPetr { witness: w, row: r.label.clone() };
            return Ok(report);
        }
    }

    let xi = xi_candidate(&un, m, can, &report.qtilde, &all, cap)?;
    report.xi = un.xi.iter().cloned().zip(xi.iter().cloned()).collect();
    let (c1, c2) = residual_rows(&with_xi(&dtr.q, &un, &xi), &ctx, can, &all)?;
    report.cond1 = c1;
    report.cond2 = c2;
    if all_zero(&report.cond1) && all_zero(&report.cond2) {
        return Ok(report);
    }
    let rows: Vec<Residual> = report.cond1.iter().chain(&report.cond2).cloned().collect();
    let left = xi_stage(&rows, &un, &all)?;
    let (verdict, g) = extended_verdict(&left, &un.assumptions, cap)?;
    report.verdict = verdict;
    report.xi_equation = g;
    Ok(report)
}
