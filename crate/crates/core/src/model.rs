//! A parsed model: coordinates with their velocities and momenta, the
//! Lagrangian, constants and optional analysis directives.

use std::collections::HashMap;

use crate::expr::{Assumptions, Expr, Symbol};

/// How a name in the model scope resolves.
#[derive(Clone, Debug)]
pub enum Binding {
    Scalar(Symbol),
    Vector(Vec<Symbol>),
}

/// A declared vector family `x[0..D-1]`.
#[derive(Clone, Debug)]
pub struct VectorDecl {
    pub name: String,
    /// Positions of the components in the coordinate list.
    pub components: Vec<usize>,
}

/// Name and weight for the transformation parameter attached to one
/// constraint of the generator. `level` 0 addresses primaries.
#[derive(Clone, Debug)]
pub struct DtrSpec {
    pub level: usize,
    pub position: usize,
    pub name: String,
    pub weight: Option<Expr>,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub dim: usize,
    pub coords: Vec<Symbol>,
    pub velocities: Vec<Symbol>,
    pub momenta: Vec<Symbol>,
    pub vectors: Vec<VectorDecl>,
    pub lagrangian: Expr,
    pub constants: Vec<Symbol>,
    pub assumptions: Assumptions,
    pub usolution: Option<Vec<Expr>>,
    pub max_chain_order: usize,
    pub dtr: Vec<DtrSpec>,
    pub(crate) scope: HashMap<String, Binding>,
}

pub const DEFAULT_MAX_ORDER: usize = 6;
pub const DEFAULT_DIM: usize = 4;

impl Model {
    /// Number of coordinates.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn lookup(&self, name: &str) -> Option<&Binding> {
        self.scope.get(name)
    }

    /// Position of a coordinate, velocity or momentum symbol.
    pub fn position(&self, s: &Symbol) -> Option<usize> {
        self.coords
            .iter()
            .position(|c| c == s)
            .or_else(|| self.velocities.iter().position(|c| c == s))
            .or_else(|| self.momenta.iter().position(|c| c == s))
    }

    /// Substitution `u^A -> values[A]`.
    pub fn velocity_map(&self, values: &[Expr]) -> HashMap<Symbol, Expr> {
        self.velocities.iter().cloned().zip(values.iter().cloned()).collect()
    }

    /// Substitution `pi_A -> values[A]`.
    pub fn momentum_map(&self, values: &[Expr]) -> HashMap<Symbol, Expr> {
        self.momenta.iter().cloned().zip(values.iter().cloned()).collect()
    }
}
