//! Full pipeline runs and their text and JSON renderings.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::brackets::{is_class_ia, BracketContext};
use crate::canonical::{self, CanAnalysis};
use crate::conjecture::{petr_check, ConjectureReport, Verdict};
use crate::expr::Expr;
use crate::lagrangian::{self, LagAnalysis};
use crate::linalg::Matrix;
use crate::model::Model;
use crate::{Error, Options, Result};

/// Last stage to run; each stage includes the ones before it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Lagrangian,
    Canonical,
    Brackets,
    Conjecture,
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "lagrangian" => Ok(Stage::Lagrangian),
            "canonical" => Ok(Stage::Canonical),
            "brackets" => Ok(Stage::Brackets),
            "conjecture" | "all" => Ok(Stage::Conjecture),
            _ => Err(format!("unknown stage `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BracketTables {
    pub poisson: Matrix,
    pub m: Matrix,
    pub class_ia: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub model: String,
    pub lagrangian: LagAnalysis,
    pub canonical: Option<CanAnalysis>,
    pub brackets: Option<BracketTables>,
    /// The refusal for systems with second class constraints is kept here.
    pub conjecture: Option<std::result::Result<ConjectureReport, Error>>,
}

impl Report {
    pub fn verdict_label(&self) -> &'static str {
        match &self.conjecture {
            Some(Ok(c)) => c.verdict.label(),
            Some(Err(_)) => "REFUSED",
            None => "-",
        }
    }

    /// Analysis outcomes that the command line reports with a nonzero status:
    /// a refused or inconclusive conjecture check.
    pub fn is_analysis_failure(&self) -> bool {
        match &self.conjecture {
            Some(Err(_)) => true,
            Some(Ok(c)) => matches!(c.verdict, Verdict::Inconclusive(_)),
            None => false,
        }
    }
}

/// Runs the pipeline up to `stage`.
pub fn run(m: &Model, stage: Stage, opts: &Options) -> Result<Report> {
    let la = lagrangian::analyze(m, opts)?;
    let mut report = Report { model: m.name.clone(), lagrangian: la, canonical: None, brackets: None, conjecture: None };
    if stage < Stage::Canonical {
        return Ok(report);
    }
    let can = canonical::analyze(m, &report.lagrangian, opts)?;
    if stage >= Stage::Brackets {
        let ctx = BracketContext::new(m, &report.lagrangian, &can);
        let (class_ia, table) = is_class_ia(&ctx, &can.all_constraints(), opts.degree_cap)?;
        report.brackets = Some(BracketTables { poisson: can.x_matrix.clone(), m: table, class_ia });
    }
    if stage >= Stage::Conjecture {
        report.conjecture = match petr_check(m, &report.lagrangian, &can, opts) {
            Ok(c) => Some(Ok(c)),
            Err(e @ Error::SecondClassPresent) => Some(Err(e)),
            Err(e) => return Err(e),
        };
    }
    report.canonical = Some(can);
    Ok(report)
}

fn s(e: &Expr) -> Value {
    Value::String(e.to_string())
}

fn list(v: &[Expr]) -> Value {
    Value::Array(v.iter().map(s).collect())
}

fn table(t: &Matrix) -> Value {
    Value::Array(t.iter().map(|r| list(r)).collect())
}

fn levelled(levels: &[Vec<Expr>]) -> Value {
    let rows = levels.iter().enumerate().flat_map(|(l, lv)| lv.iter().map(move |e| json!([l + 1, e.to_string()])));
    Value::Array(rows.collect())
}

fn joined(v: &[Expr]) -> String {
    v.iter().map(Expr::to_string).collect::<Vec<_>>().join(", ")
}

fn conjecture_json(c: &std::result::Result<ConjectureReport, Error>) -> Value {
    let mut o = Map::new();
    let c = match c {
        Ok(c) => c,
        Err(e) => {
            o.insert("verdict".into(), Value::Null);
            o.insert("refused".into(), Value::String(e.to_string()));
            return Value::Object(o);
        }
    };
    o.insert("verdict".into(), Value::String(c.verdict.label().into()));
    match &c.verdict {
        Verdict::NotPetr { witness, row } => {
            o.insert("witness".into(), s(witness));
            o.insert("row".into(), Value::String(row.clone()));
        }
        Verdict::Inconclusive(reason) => {
            o.insert("reason".into(), Value::String(reason.clone()));
        }
        _ => {}
    }
    if !c.xi.is_empty() && !matches!(c.verdict, Verdict::NotPetr { .. }) {
        let xi: Map<String, Value> = c.xi.iter().map(|(k, v)| (k.name().to_string(), s(v))).collect();
        o.insert("xi".into(), Value::Object(xi));
    }
    if let Verdict::PetrExcept { locus } = &c.verdict {
        o.insert("locus".into(), Value::String(joined(locus)));
    }
    if let Some(g) = &c.xi_equation {
        o.insert("Xi_equation".into(), s(g));
    }
    Value::Object(o)
}

/// Machine-readable report with a fixed key order.
pub fn to_json(r: &Report) -> Value {
    let la = &r.lagrangian;
    let mut o = Map::new();
    o.insert("model".into(), Value::String(r.model.clone()));
    o.insert("rank".into(), json!(la.rank));
    o.insert("null_count".into(), json!(la.z.len()));
    o.insert("lagrangian_constraints".into(), levelled(&la.constraint_levels()));
    if let Some(can) = &r.canonical {
        o.insert("primaries".into(), list(&can.primaries));
        o.insert("hamiltonian".into(), s(&can.hamiltonian));
        o.insert("secondaries".into(), levelled(&can.secondaries));
        o.insert("class".into(), json!({ "first": list(&can.class.first), "second": list(&can.class.second) }));
    }
    if let Some(b) = &r.brackets {
        o.insert("class_ia".into(), Value::Bool(b.class_ia));
        o.insert("brackets".into(), json!({ "poisson": table(&b.poisson), "m": table(&b.m) }));
    }
    if let Some(c) = &r.conjecture {
        o.insert("conjecture".into(), conjecture_json(c));
    }
    Value::Object(o)
}

fn section(out: &mut String, title: &str, items: &[String]) {
    section_at(out, "", title, items);
}

fn section_at(out: &mut String, indent: &str, title: &str, items: &[String]) {
    let _ = writeln!(out, "{indent}{title}");
    if items.is_empty() {
        let _ = writeln!(out, "{indent}  (none)");
    }
    for i in items {
        let _ = writeln!(out, "{indent}  {i}");
    }
}

fn joined_or_none(v: &[Expr]) -> String {
    if v.is_empty() {
        "(none)".into()
    } else {
        joined(v)
    }
}

fn levelled_lines(levels: &[Vec<Expr>]) -> Vec<String> {
    levels.iter().enumerate().flat_map(|(l, lv)| lv.iter().map(move |e| format!("[{}] {e}", l + 1))).collect()
}

fn table_lines(t: &Matrix) -> Vec<String> {
    t.iter().map(|r| r.iter().map(Expr::to_string).collect::<Vec<_>>().join(" | ")).collect()
}

/// Human-readable report.
pub fn to_text(r: &Report) -> String {
    let la = &r.lagrangian;
    let mut out = String::new();
    let _ = writeln!(out, "model {}", r.model);
    let _ = writeln!(out, "hessian rank {}, null directions {}", la.rank, la.z.len());
    section(&mut out, "lagrangian constraints", &levelled_lines(&la.constraint_levels()));
    if let Some(can) = &r.canonical {
        section(&mut out, "primaries", &can.primaries.iter().map(Expr::to_string).collect::<Vec<_>>());
        let _ = writeln!(out, "hamiltonian\n  {}", can.hamiltonian);
        section(&mut out, "secondaries", &levelled_lines(&can.secondaries));
        if !can.multiplier_conditions.is_empty() {
            section(&mut out, "multiplier conditions", &can.multiplier_conditions.iter().map(|c| format!("[{}] {} = 0", c.level, c.expr)).collect::<Vec<_>>());
        }
        let _ = writeln!(out, "class\n  first: {}\n  second: {}", joined_or_none(&can.class.first), joined_or_none(&can.class.second));
    }
    if let Some(b) = &r.brackets {
        let _ = writeln!(out, "class IA: {}", b.class_ia);
        section(&mut out, "poisson brackets mod constraints", &table_lines(&b.poisson));
        section(&mut out, "M-brackets mod constraints", &table_lines(&b.m));
    }
    match &r.conjecture {
        None => {}
        Some(Err(e)) => {
            let _ = writeln!(out, "conjecture\n  refused: {e}");
        }
        Some(Ok(c)) => {
            let _ = writeln!(out, "conjecture\n  Q = {}", c.dtr.q);
            section_at(&mut out, "  ", "Q~ mod primaries", &c.qtilde.iter().map(|(g, k)| format!("({k}) * [{g}]")).collect::<Vec<_>>());
            section_at(&mut out, "  ", "cond1 residuals", &c.cond1.iter().map(|x| format!("{}: {}", x.label, x.expr)).collect::<Vec<_>>());
            section_at(&mut out, "  ", "cond2 residuals", &c.cond2.iter().map(|x| format!("{}: {}", x.label, x.expr)).collect::<Vec<_>>());
            for (k, v) in &c.xi {
                let _ = writeln!(out, "  {k} = {v}");
            }
            if let Some(g) = &c.xi_equation {
                let _ = writeln!(out, "  Xi equation: {g} = 0");
            }
            let detail = match &c.verdict {
                Verdict::PetrAll => String::new(),
                Verdict::PetrExcept { locus } => format!(" except on {} = 0", joined(locus)),
                Verdict::NotPetr { witness, row } => format!(" witness {witness} (row {row})"),
                Verdict::Inconclusive(reason) => format!(" {reason}"),
            };
            let _ = writeln!(out, "  verdict {}{detail}", c.verdict.label());
        }
    }
    out
}
