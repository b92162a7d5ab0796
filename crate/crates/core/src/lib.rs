//! Finite-domain propagation for linear constraints whose variables are
//! also tied together by alldifferent constraints.
//!
//! The linear filters live in [`linear`], the alldifferent filter in
//! [`alldiff`], and [`search`] combines them in a backtracking solver.
//! [`model`] holds the instance format and the benchmark encoders, and
//! [`oracle`] holds exhaustive reference implementations.

pub mod alldiff;
pub mod domain;
pub mod error;
pub mod linear;
pub mod model;
pub mod oracle;
pub mod report;
pub mod search;

pub use domain::{DomainStore, FiniteDomain, VariableId};
pub use error::{GenerateError, ModelError, OracleError, ParseError};
pub use linear::FilterMode;
pub use model::ProblemInstance;
pub use search::{SearchStats, SolveOutcome, Solver, SolverConfig};
