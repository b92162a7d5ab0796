use std::collections::VecDeque;
use std::time::Instant;

use crate::domain::{DomainStore, Mark, VariableId};
use crate::error::ModelError;
use crate::model::{Constraint, ProblemInstance};
use crate::search::propagator::{
    AlldiffPropagator, BoundDisjunctionPropagator, LinearPropagator, PropagationResult, Priority, Propagator,
};
use crate::search::{SearchStats, SolverConfig, VarOrder};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Vec<i64>),
    Unsat,
    Limit,
}

impl SolveOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            SolveOutcome::Sat(_) => "sat",
            SolveOutcome::Unsat => "unsat",
            SolveOutcome::Limit => "limit",
        }
    }
}

/// How a search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SearchEnd {
    Exhausted,
    Stopped,
    Limit,
}

struct Frame {
    var: VariableId,
    values: Vec<i64>,
    next: usize,
    mark: Option<Mark>,
}

pub struct Solver {
    problem: ProblemInstance,
    config: SolverConfig,
    store: DomainStore,
    propagators: Vec<Box<dyn Propagator>>,
    watchers: Vec<Vec<usize>>,
    queued: Vec<bool>,
    cheap: VecDeque<usize>,
    expensive: VecDeque<usize>,
    stats: SearchStats,
}

impl Solver {
    pub fn new(problem: &ProblemInstance, config: &SolverConfig) -> Result<Self, ModelError> {
        problem.validate()?;
        let mut store = DomainStore::new();
        for v in &problem.variables {
            store.add_variable(v.domain.to_domain());
        }

        let mut propagators: Vec<Box<dyn Propagator>> = Vec::new();
        for face in problem.normalized_linears() {
            propagators.push(Box::new(LinearPropagator::new(face, config.filter_mode)));
        }
        for c in &problem.constraints {
            if let Constraint::BoundOr(bd) = c {
                propagators.push(Box::new(BoundDisjunctionPropagator::new(bd.clone())));
            }
        }
        for ad in problem.alldifferents() {
            propagators.push(Box::new(AlldiffPropagator::new(ad)));
        }

        let mut watchers = vec![Vec::new(); problem.num_vars()];
        for (i, p) in propagators.iter().enumerate() {
            for x in p.watched() {
                if watchers[x.0].last() != Some(&i) {
                    watchers[x.0].push(i);
                }
            }
        }

        Ok(Solver {
            problem: problem.clone(),
            config: *config,
            store,
            queued: vec![false; propagators.len()],
            propagators,
            watchers,
            cheap: VecDeque::new(),
            expensive: VecDeque::new(),
            stats: SearchStats::default(),
        })
    }

    pub fn store(&self) -> &DomainStore {
        &self.store
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn num_propagators(&self) -> usize {
        self.propagators.len()
    }

    fn enqueue(&mut self, p: usize) {
        if self.queued[p] {
            return;
        }
        self.queued[p] = true;
        match self.propagators[p].priority() {
            Priority::Cheap => self.cheap.push_back(p),
            Priority::Expensive => self.expensive.push_back(p),
        }
    }

    fn clear_queue(&mut self) {
        for p in self.cheap.drain(..).chain(self.expensive.drain(..)) {
            self.queued[p] = false;
        }
    }

    /// Runs queued propagators until none has work left. Returns false on
    /// conflict, leaving the queue empty.
    fn propagate_fixpoint(&mut self) -> bool {
        while let Some(p) = self.cheap.pop_front().or_else(|| self.expensive.pop_front()) {
            self.queued[p] = false;
            let result = self.propagators[p].propagate(&mut self.store, &mut self.stats);
            let modified = self.store.drain_modified();
            if result == PropagationResult::Conflict
                || modified.iter().any(|&x| self.store.domain(x).is_empty())
            {
                self.clear_queue();
                return false;
            }
            let skip_self = self.propagators[p].idempotent();
            for x in modified {
                for k in 0..self.watchers[x.0].len() {
                    let q = self.watchers[x.0][k];
                    if !(q == p && skip_self) {
                        self.enqueue(q);
                    }
                }
            }
        }
        true
    }

    /// Runs every propagator to a joint fixpoint on the initial domains.
    /// Returns false if that fails.
    pub fn propagate_root(&mut self) -> bool {
        for p in 0..self.propagators.len() {
            self.enqueue(p);
        }
        self.store.drain_modified();
        self.propagate_fixpoint()
    }

    fn select_var(&self) -> Option<VariableId> {
        let unfixed = self.store.variables().filter(|&x| !self.store.is_fixed(x));
        match self.config.var_order {
            VarOrder::Lexicographic => unfixed.into_iter().next(),
            VarOrder::MinDomain => unfixed.min_by_key(|&x| (self.store.size(x), x.0)),
        }
    }

    fn assignment(&self) -> Vec<i64> {
        self.store.variables().map(|x| self.store.min(x)).collect()
    }

    fn search(&mut self, mut on_solution: impl FnMut(&[i64]) -> bool) -> SearchEnd {
        self.stats = SearchStats::default();
        let start = Instant::now();
        let base = self.store.checkpoint();
        let end = self.search_from_root(start, &mut on_solution);
        self.clear_queue();
        self.store.rollback(base);
        end
    }

    fn unwind(&mut self, stack: &mut Vec<Frame>) {
        while let Some(mut f) = stack.pop() {
            if let Some(mark) = f.mark.take() {
                self.store.rollback(mark);
            }
        }
    }

    fn search_from_root(&mut self, start: Instant, on_solution: &mut impl FnMut(&[i64]) -> bool) -> SearchEnd {
        if !self.propagate_root() {
            self.stats.conflicts += 1;
            return SearchEnd::Exhausted;
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                descend = false;
                match self.select_var() {
                    None => {
                        let a = self.assignment();
                        if self.problem.is_solution(&a) {
                            if !on_solution(&a) {
                                self.unwind(&mut stack);
                                return SearchEnd::Stopped;
                            }
                        } else {
                            debug_assert!(false, "fixpoint accepted a non-solution");
                            self.stats.conflicts += 1;
                        }
                    }
                    Some(var) => stack.push(Frame {
                        var,
                        values: self.store.domain(var).values().collect(),
                        next: 0,
                        mark: None,
                    }),
                }
            }

            let Some(top) = stack.last_mut() else {
                return SearchEnd::Exhausted;
            };
            if let Some(mark) = top.mark.take() {
                self.store.rollback(mark);
            }
            if top.next == top.values.len() {
                stack.pop();
                continue;
            }
            let (var, value) = (top.var, top.values[top.next]);
            top.next += 1;

            if self.config.node_limit.is_some_and(|n| self.stats.decisions >= n)
                || self.config.time_limit.is_some_and(|t| start.elapsed() >= t)
            {
                self.unwind(&mut stack);
                return SearchEnd::Limit;
            }
            top.mark = Some(self.store.checkpoint());
            self.stats.decisions += 1;
            self.store.assign(var, value);
            for x in self.store.drain_modified() {
                for k in 0..self.watchers[x.0].len() {
                    let q = self.watchers[x.0][k];
                    self.enqueue(q);
                }
            }
            if self.propagate_fixpoint() {
                descend = true;
            } else {
                self.stats.conflicts += 1;
            }
        }
    }

    /// First solution in search order.
    pub fn solve(&mut self) -> SolveOutcome {
        let mut found = None;
        match self.search(|a| {
            found = Some(a.to_vec());
            false
        }) {
            SearchEnd::Stopped => SolveOutcome::Sat(found.expect("stopped without a solution")),
            SearchEnd::Exhausted => SolveOutcome::Unsat,
            SearchEnd::Limit => SolveOutcome::Limit,
        }
    }

    /// Every solution in search order, or `None` if a limit was hit.
    pub fn solve_all(&mut self) -> Option<Vec<Vec<i64>>> {
        let mut all = Vec::new();
        match self.search(|a| {
            all.push(a.to_vec());
            true
        }) {
            SearchEnd::Limit => None,
            _ => Some(all),
        }
    }
}

/// Solves `problem` with a fresh solver, returning the outcome and stats.
pub fn solve(problem: &ProblemInstance, config: &SolverConfig) -> Result<(SolveOutcome, SearchStats), ModelError> {
    let mut s = Solver::new(problem, config)?;
    let outcome = s.solve();
    Ok((outcome, s.stats()))
}
