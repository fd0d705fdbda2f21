//! Exact symbolic constraint analysis for singular Lagrangian systems.
//!
//! The pipeline parses a model, derives Lagrangian and canonical constraint
//! chains, builds gauge generators and decides whether every first class
//! constraint generates a gauge transformation of the extended action.

pub mod brackets;
pub mod canonical;
pub mod conjecture;
pub mod corpus;
pub mod expr;
pub mod lagrangian;
pub mod linalg;
pub mod model;
pub mod parser;
pub mod report;
pub mod transform;

pub use expr::{Expr, Poly, Symbol};

/// Exact rational scalar used throughout the engine.
pub type Rational = num_rational::BigRational;

/// Everything that can stop an analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("Groebner basis element exceeded the degree cap {0}")]
    DegreeCapExceeded(u32),
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("cannot decide whether pivot `{0}` vanishes")]
    PivotUndecidable(String),
    #[error("constraints are nonlinear in velocities and no velocity solution was supplied")]
    NonlinearNoUserSolution,
    #[error("user velocity solution {index} does not satisfy the primary constraints")]
    UserSolutionInvalid { index: usize },
    #[error("constraint chain did not terminate within {0} steps")]
    ChainNotTerminated(usize),
    #[error("second class bracket matrix is not invertible")]
    XNotInvertible,
    #[error("no associated function found for `{0}`")]
    AssociatedFunctionMissing(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("second class constraints present; the conjecture check requires a purely first class system")]
    SecondClassPresent,
    #[error("could not decompose `{0}` over the constraints")]
    DecompositionFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Knobs shared by every analysis stage.
#[derive(Clone, Debug)]
pub struct Options {
    /// Total degree bound for Groebner basis elements.
    pub degree_cap: u32,
    /// Overrides the model's `max_order` when set.
    pub max_order: Option<usize>,
    /// Refuse pivots whose nonvanishing holds only generically.
    pub strict_pivots: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { degree_cap: expr::DEFAULT_DEGREE_CAP, max_order: None, strict_pivots: false }
    }
}
