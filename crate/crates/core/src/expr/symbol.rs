//! Interned symbols.
//!
//! Every symbol is created once per distinct `(name, kind)` and shared through an
//! `Arc`, so equality and hashing are pointer based while ordering follows the
//! fixed variable order used by the term order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, OnceLock};

use super::poly::Poly;

/// What a symbol stands for. The variant decides how the symbol differentiates.
#[derive(Clone, Debug)]
pub enum Kind {
    /// Model constant such as `kappa` or `m`.
    Constant,
    /// Evolution parameter of the time derivative.
    Time,
    /// Transformation parameter depending only on time; `order` counts tildes.
    Param { base: String, order: u32 },
    /// Unknown coefficient solved for by the conjecture check.
    Unknown { base: String, order: u32 },
    /// Auxiliary value standing in for an unphysical coordinate.
    Aux { base: String, order: u32 },
    /// Arbitrary function `v^m` of the Lagrangian velocity solution.
    Arbitrary(usize),
    /// Coordinate `q^A`.
    Coord(usize),
    /// Velocity `u^A`.
    Vel(usize),
    /// Momentum `pi_A`.
    Mom(usize),
    /// Free function `theta^m(q, pi)`.
    FreeFn(usize),
    /// Opaque partial derivative of a free function.
    Partial { func: Symbol, wrt: Vec<Symbol> },
    /// Principal `root`-th root of a radical-free polynomial.
    Radical { base: Poly, root: u32 },
}

impl Kind {
    fn rank(&self) -> u8 {
        match self {
            Kind::Constant => 0,
            Kind::Param { .. } => 1,
            Kind::Unknown { .. } => 2,
            Kind::Aux { .. } => 3,
            Kind::Time => 4,
            Kind::Arbitrary(_) => 5,
            Kind::Coord(_) => 6,
            Kind::Vel(_) => 7,
            Kind::Mom(_) => 8,
            Kind::FreeFn(_) => 9,
            Kind::Partial { .. } => 10,
            Kind::Radical { .. } => 11,
        }
    }

    fn index(&self) -> i64 {
        match self {
            Kind::Arbitrary(i) | Kind::Coord(i) | Kind::Vel(i) | Kind::Mom(i) | Kind::FreeFn(i) => {
                *i as i64
            }
            Kind::Partial { func, .. } => func.index(),
            _ => 0,
        }
    }
}

pub struct SymbolData {
    name: String,
    kind: Kind,
    rank: u8,
    index: i64,
    serial: u64,
}

/// Shared handle to an interned symbol.
#[derive(Clone)]
pub struct Symbol(Arc<SymbolData>);

/// Name, rank, index, and the serials of any symbols a compound symbol is built
/// from, so equal spellings over different symbols stay distinct.
type InternKey = (String, u8, i64, Vec<u64>);

fn interner() -> &'static Mutex<HashMap<InternKey, Symbol>> {
    static TABLE: OnceLock<Mutex<HashMap<InternKey, Symbol>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashMap::new()))
}

static SERIAL: AtomicU64 = AtomicU64::new(0);

impl Symbol {
    /// Interns a symbol. Two calls with the same name and kind return the same handle.
    pub fn new(name: impl Into<String>, kind: Kind) -> Symbol {
        let name = name.into();
        let rank = kind.rank();
        let index = kind.index();
        let parts = match &kind {
            Kind::Radical { base, .. } => base.variables().iter().map(|v| v.0.serial).collect(),
            Kind::Partial { func, wrt } => std::iter::once(func).chain(wrt).map(|v| v.0.serial).collect(),
            _ => Vec::new(),
        };
        let key = (name.clone(), rank, index, parts);
        let mut table = interner().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = table.get(&key) {
            return s.clone();
        }
        let sym = Symbol(Arc::new(SymbolData {
            name,
            kind,
            rank,
            index,
            serial: SERIAL.fetch_add(1, AtomicOrdering::Relaxed),
        }));
        table.insert(key, sym.clone());
        sym
    }

    pub fn constant(name: &str) -> Symbol {
        Symbol::new(name, Kind::Constant)
    }

    pub fn time() -> Symbol {
        Symbol::new("tau", Kind::Time)
    }

    pub fn coord(name: &str, index: usize) -> Symbol {
        Symbol::new(name, Kind::Coord(index))
    }

    pub fn velocity(name: &str, index: usize) -> Symbol {
        Symbol::new(name, Kind::Vel(index))
    }

    pub fn momentum(name: &str, index: usize) -> Symbol {
        Symbol::new(name, Kind::Mom(index))
    }

    pub fn free_fn(name: &str, index: usize) -> Symbol {
        Symbol::new(name, Kind::FreeFn(index))
    }

    pub fn arbitrary(index: usize) -> Symbol {
        Symbol::new(format!("v{index}"), Kind::Arbitrary(index))
    }

    pub fn param(base: &str, order: u32) -> Symbol {
        Symbol::new(tilde_name(base, order), Kind::Param { base: base.to_string(), order })
    }

    pub fn unknown(base: &str, order: u32) -> Symbol {
        Symbol::new(tilde_name(base, order), Kind::Unknown { base: base.to_string(), order })
    }

    pub fn aux(base: &str, order: u32) -> Symbol {
        Symbol::new(tilde_name(base, order), Kind::Aux { base: base.to_string(), order })
    }

    /// Opaque partial of a free function; `wrt` is kept sorted so mixed partials commute.
    pub fn partial(func: &Symbol, mut wrt: Vec<Symbol>) -> Symbol {
        wrt.sort();
        let list: Vec<&str> = wrt.iter().map(|s| s.name()).collect();
        let name = format!("D[{};{}]", func.name(), list.join(","));
        Symbol::new(name, Kind::Partial { func: func.clone(), wrt })
    }

    pub fn radical(base: Poly, root: u32) -> Symbol {
        let name = if root == 2 {
            format!("sqrt({base})")
        } else {
            format!("({base})^(1/{root})")
        };
        Symbol::new(name, Kind::Radical { base, root })
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn kind(&self) -> &Kind {
        &self.0.kind
    }

    pub fn index(&self) -> i64 {
        self.0.index
    }

    /// Position of the symbol class in the variable order.
    pub fn rank(&self) -> u8 {
        self.0.rank
    }

    pub fn is_coord(&self) -> bool {
        matches!(self.0.kind, Kind::Coord(_))
    }

    pub fn is_velocity(&self) -> bool {
        matches!(self.0.kind, Kind::Vel(_))
    }

    pub fn is_momentum(&self) -> bool {
        matches!(self.0.kind, Kind::Mom(_))
    }

    pub fn is_radical(&self) -> bool {
        matches!(self.0.kind, Kind::Radical { .. })
    }

    /// True for symbols that only depend on time: parameters, unknowns, auxiliaries.
    pub fn is_time_function(&self) -> bool {
        matches!(self.0.kind, Kind::Param { .. } | Kind::Unknown { .. } | Kind::Aux { .. })
    }

    /// Symbols that act as coefficients from the point of view of phase space.
    pub fn is_parameter_like(&self) -> bool {
        matches!(
            self.0.kind,
            Kind::Constant | Kind::Param { .. } | Kind::Unknown { .. } | Kind::Aux { .. } | Kind::Time
        )
    }

    /// Tilde order for time-dependent parameters, zero otherwise.
    pub fn tilde_order(&self) -> u32 {
        match &self.0.kind {
            Kind::Param { order, .. } | Kind::Unknown { order, .. } | Kind::Aux { order, .. } => *order,
            _ => 0,
        }
    }

    /// The symbol one tilde order higher, for time-dependent parameters.
    pub fn tilde_successor(&self) -> Option<Symbol> {
        match &self.0.kind {
            Kind::Param { base, order } => Some(Symbol::param(base, order + 1)),
            Kind::Unknown { base, order } => Some(Symbol::unknown(base, order + 1)),
            Kind::Aux { base, order } => Some(Symbol::aux(base, order + 1)),
            _ => None,
        }
    }
}

fn tilde_name(base: &str, order: u32) -> String {
    let mut s = base.to_string();
    for _ in 0..order {
        s.push('~');
    }
    s
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let (a, b) = (&*self.0, &*other.0);
        a.rank
            .cmp(&b.rank)
            .then(a.index.cmp(&b.index))
            .then_with(|| a.name.cmp(&b.name))
            .then(a.serial.cmp(&b.serial))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_returns_same_handle() {
        let a = Symbol::coord("q1", 1);
        let b = Symbol::coord("q1", 1);
        assert_eq!(a, b);
        assert_ne!(a, Symbol::velocity("u1", 1));
    }

    #[test]
    fn variable_order_by_class_then_index() {
        let q = Symbol::coord("q9", 9);
        let u = Symbol::velocity("u1", 1);
        let p = Symbol::momentum("pq1", 1);
        assert!(q < u && u < p);
        assert!(Symbol::coord("q1", 1) < q);
    }

    #[test]
    fn tilde_successor_names() {
        let e = Symbol::param("eps2", 1);
        assert_eq!(e.name(), "eps2~");
        assert_eq!(e.tilde_successor().unwrap().name(), "eps2~~");
    }
}
