//! Exact decision procedures for information inequalities over
//! modular, step, polymatroid and monotone set functions, and entropy-based
//! upper bounds on conjunctive query output size.

pub mod bounds;
pub mod cone;
pub mod config;
pub mod dsl;
pub mod error;
pub mod formats;
pub mod function;
pub mod lp;
pub mod model;
pub mod reductions;
pub mod validity;

pub use config::Limits;
pub use error::{Error, Result};
pub use function::{
    basic_modular, entropic_from_distribution, step_function, EntropicVector, JointDistribution,
    SetFunction,
};
pub use model::{
    expand_measure, format_rational, parse_rational, rat, ratio, InequalityExpr, MeasureTerm,
    Rational, TwoSided, VarSet, VariableUniverse,
};
pub use validity::{check, CheckReport, Decomposition, Semantics, Verdict, Witness};
