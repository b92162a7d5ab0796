//! Depth-first search with a propagation fixpoint at every node.

mod engine;
pub mod propagator;

use std::time::Duration;

use crate::linear::FilterMode;

pub use engine::{solve, SolveOutcome, Solver};
pub use propagator::{
    bound_disjunction_propagate, AlldiffPropagator, BoundDisjunction, BoundDisjunctionPropagator,
    LinearPropagator, PropagationResult, Priority, Propagator,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Value trials.
    pub decisions: u64,
    /// Propagation failures, including one at the root.
    pub conflicts: u64,
    /// Bounds derived by linear propagators.
    pub bounds_computed: u64,
    /// Bounds where the improved filter beat the standard one.
    pub bounds_improved: u64,
    /// Sum of the gains over `bounds_improved`.
    pub improvement_total: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarOrder {
    /// First unfixed variable in declaration order.
    Lexicographic,
    /// Smallest domain, ties by declaration order.
    MinDomain,
}

impl VarOrder {
    pub fn name(self) -> &'static str {
        match self {
            VarOrder::Lexicographic => "lex",
            VarOrder::MinDomain => "min-domain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueOrder {
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub filter_mode: FilterMode,
    pub var_order: VarOrder,
    pub value_order: ValueOrder,
    /// Maximum number of decisions.
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SolverConfig {
    pub fn new(filter_mode: FilterMode) -> Self {
        SolverConfig {
            filter_mode,
            var_order: VarOrder::Lexicographic,
            value_order: ValueOrder::Ascending,
            node_limit: None,
            time_limit: None,
        }
    }

    pub fn with_var_order(mut self, var_order: VarOrder) -> Self {
        self.var_order = var_order;
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig::new(FilterMode::Improved)
    }
}
