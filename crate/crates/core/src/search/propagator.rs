use crate::alldiff::{AlldiffConstraint, AlldiffFilter};
use crate::domain::{ChangeReport, DomainStore, VariableId};
use crate::linear::{calculate_bounds_standard, Direction, FilterMode, NormalizedLinear};
use crate::search::SearchStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationResult {
    /// Nothing changed.
    Fixed,
    /// This many domain updates were made.
    Pruned(usize),
    Conflict,
}

/// Scheduling class; every queued cheap propagator runs before any
/// expensive one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Priority {
    Cheap,
    Expensive,
}

pub trait Propagator: Send {
    fn watched(&self) -> Vec<VariableId>;

    fn priority(&self) -> Priority {
        Priority::Cheap
    }

    /// Whether one run always reaches a fixpoint of this propagator alone.
    fn idempotent(&self) -> bool {
        false
    }

    fn propagate(&mut self, store: &mut DomainStore, stats: &mut SearchStats) -> PropagationResult;
}

fn tally(changes: usize) -> PropagationResult {
    if changes == 0 {
        PropagationResult::Fixed
    } else {
        PropagationResult::Pruned(changes)
    }
}

/// One `<=` or `>=` face of a linear constraint.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    constraint: NormalizedLinear,
    /// `constraint` rewritten as `<=`, which yields the same bounds.
    le: NormalizedLinear,
    mode: FilterMode,
}

impl LinearPropagator {
    pub fn new(constraint: NormalizedLinear, mode: FilterMode) -> Self {
        let le = constraint.as_le();
        LinearPropagator { constraint, le, mode }
    }

    pub fn constraint(&self) -> &NormalizedLinear {
        &self.constraint
    }
}

impl Propagator for LinearPropagator {
    fn watched(&self) -> Vec<VariableId> {
        self.constraint.expr.vars().collect()
    }

    fn propagate(&mut self, store: &mut DomainStore, stats: &mut SearchStats) -> PropagationResult {
        let r = self.mode.filter(&self.le, store);
        if !r.consistent {
            return PropagationResult::Conflict;
        }
        stats.bounds_computed += r.bounds.len() as u64;
        if self.mode == FilterMode::Improved {
            let standard = calculate_bounds_standard(&self.le, store);
            if standard.consistent {
                for (imp, std) in r.bounds.iter().zip(&standard.bounds) {
                    let gain = match imp.direction {
                        Direction::Upper => std.value - imp.value,
                        Direction::Lower => imp.value - std.value,
                    };
                    if gain > 0 {
                        stats.bounds_improved += 1;
                        stats.improvement_total += gain as u64;
                    }
                }
            }
        }

        let mut changes = 0;
        for b in &r.bounds {
            let report = match b.direction {
                Direction::Upper => store.tighten_upper(b.var, b.value),
                Direction::Lower => store.tighten_lower(b.var, b.value),
            };
            match report {
                ChangeReport::Emptied => return PropagationResult::Conflict,
                ChangeReport::Tightened => changes += 1,
                ChangeReport::Unchanged => {}
            }
        }
        tally(changes)
    }
}

/// Hyper-arc consistency on one alldifferent.
#[derive(Debug, Clone)]
pub struct AlldiffPropagator {
    filter: AlldiffFilter,
}

impl AlldiffPropagator {
    pub fn new(ad: AlldiffConstraint) -> Self {
        AlldiffPropagator {
            filter: AlldiffFilter::new(ad),
        }
    }
}

impl Propagator for AlldiffPropagator {
    fn watched(&self) -> Vec<VariableId> {
        self.filter.constraint().vars.clone()
    }

    fn priority(&self) -> Priority {
        Priority::Expensive
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&mut self, store: &mut DomainStore, _stats: &mut SearchStats) -> PropagationResult {
        let Ok(removals) = self.filter.prune(store) else {
            return PropagationResult::Conflict;
        };
        let mut changes = 0;
        for (x, v) in removals {
            match store.remove_value(x, v) {
                ChangeReport::Emptied => return PropagationResult::Conflict,
                ChangeReport::Tightened => changes += 1,
                ChangeReport::Unchanged => {}
            }
        }
        tally(changes)
    }
}

/// `y_1 <= k_1 \/ ... \/ y_m <= k_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundDisjunction {
    pub disjuncts: Vec<(VariableId, i64)>,
}

/// Unit propagation: a disjunct is dead once `min(y) > k`. With every
/// disjunct dead the constraint fails; with one left it is enforced.
pub fn bound_disjunction_propagate(bd: &BoundDisjunction, store: &mut DomainStore) -> PropagationResult {
    let mut alive = bd.disjuncts.iter().filter(|&&(y, k)| store.min(y) <= k);
    let Some(&(y, k)) = alive.next() else {
        return PropagationResult::Conflict;
    };
    if alive.next().is_some() {
        return PropagationResult::Fixed;
    }
    match store.tighten_upper(y, k) {
        ChangeReport::Emptied => PropagationResult::Conflict,
        ChangeReport::Tightened => PropagationResult::Pruned(1),
        ChangeReport::Unchanged => PropagationResult::Fixed,
    }
}

#[derive(Debug, Clone)]
pub struct BoundDisjunctionPropagator {
    bd: BoundDisjunction,
}

impl BoundDisjunctionPropagator {
    pub fn new(bd: BoundDisjunction) -> Self {
        BoundDisjunctionPropagator { bd }
    }
}

impl Propagator for BoundDisjunctionPropagator {
    fn watched(&self) -> Vec<VariableId> {
        self.bd.disjuncts.iter().map(|d| d.0).collect()
    }

    fn idempotent(&self) -> bool {
        true
    }

    fn propagate(&mut self, store: &mut DomainStore, _stats: &mut SearchStats) -> PropagationResult {
        bound_disjunction_propagate(&self.bd, store)
    }
}
