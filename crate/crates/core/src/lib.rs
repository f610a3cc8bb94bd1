//! Online matrix-vector products and the fine-grained reductions among them.
//!
//! Six products are supported: Boolean, exists-equality, exists-dominance,
//! min-witness, min-max and bounded monotone min-plus. Each is available as
//! a naive [`OnlineSolver`] and, through a [`Chain`] of reductions, as a
//! solver built from instances of another product. The [`harness`] module
//! generates instances, runs differential and adaptive checks and collects
//! the operation counts each reduction is expected to respect.

pub mod config;
pub mod counters;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod oracle;
pub mod problem;
pub mod reduce;
pub mod solver;
pub mod value;

pub use config::{HittingSize, Param, ReductionConfig};
pub use counters::{CounterReport, Counters};
pub use error::{OmvError, Result};
pub use matrix::{fin_vec, ColumnVector, Domain, SquareMatrix};
pub use problem::{
    validate, validate_query, validate_with_bound, Family, MonotonicityCase, ProblemKind, Violation,
};
pub use solver::{build_solver, Chain, Link, OnlineSolver};
pub use value::{compare, Value};
