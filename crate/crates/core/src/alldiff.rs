//! Hyper-arc consistency for alldifferent via bipartite matching.
//!
//! The constraint is consistent iff the variable/value graph has a matching
//! that covers every variable. Given such a matching `M`, an edge belongs
//! to some maximum matching iff it is in `M`, lies on an alternating cycle,
//! or lies on an even alternating path that ends in a free value. Orienting
//! unmatched edges variable -> value, matched edges value -> variable, and
//! adding a sink with edges free value -> sink -> matched value turns both
//! cases into "both ends are in the same strongly connected component".

use crate::domain::{DomainStore, VariableId};
use crate::error::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlldiffConstraint {
    pub id: usize,
    pub vars: Vec<VariableId>,
}

impl AlldiffConstraint {
    pub fn new(id: usize, vars: Vec<VariableId>) -> Result<Self, ModelError> {
        if vars.len() < 2 {
            return Err(ModelError::AlldiffArity(vars.len()));
        }
        for (i, x) in vars.iter().enumerate() {
            if vars[..i].contains(x) {
                return Err(ModelError::DuplicateAlldiffVariable(x.0));
            }
        }
        Ok(AlldiffConstraint { id, vars })
    }
}

/// Raised when no matching covers every variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("alldifferent has no saturating matching")]
pub struct AlldiffConflict;

/// Variable/value bipartite graph over the current domains.
#[derive(Debug, Clone)]
pub struct ValueGraph {
    /// Value of each value node.
    values: Vec<i64>,
    /// Value nodes adjacent to each variable, ascending by value.
    adj: Vec<Vec<usize>>,
    var_match: Vec<Option<usize>>,
    val_match: Vec<Option<usize>>,
}

impl ValueGraph {
    /// Builds the graph; only values present in some domain become nodes.
    pub fn build(vars: &[VariableId], store: &DomainStore) -> Self {
        let mut values: Vec<i64> = vars
            .iter()
            .flat_map(|&x| store.domain(x).values())
            .collect();
        values.sort_unstable();
        values.dedup();
        let adj = vars
            .iter()
            .map(|&x| {
                store
                    .domain(x)
                    .values()
                    .map(|v| values.binary_search(&v).expect("value collected above"))
                    .collect()
            })
            .collect();
        ValueGraph {
            var_match: vec![None; vars.len()],
            val_match: vec![None; values.len()],
            values,
            adj,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.adj.len()
    }

    pub fn num_values(&self) -> usize {
        self.values.len()
    }

    /// Seeds the matching with previous assignments that are still edges.
    pub fn seed(&mut self, previous: &[Option<i64>]) {
        for (x, prev) in previous.iter().enumerate() {
            let Some(v) = prev else { continue };
            if let Ok(k) = self.values.binary_search(v) {
                if self.val_match[k].is_none() && self.adj[x].binary_search(&k).is_ok() {
                    self.var_match[x] = Some(k);
                    self.val_match[k] = Some(x);
                }
            }
        }
    }

    fn augment(&mut self, x: usize, seen: &mut [bool]) -> bool {
        for i in 0..self.adj[x].len() {
            let v = self.adj[x][i];
            if seen[v] {
                continue;
            }
            seen[v] = true;
            let free = match self.val_match[v] {
                None => true,
                Some(y) => self.augment(y, seen),
            };
            if free {
                self.var_match[x] = Some(v);
                self.val_match[v] = Some(x);
                return true;
            }
        }
        false
    }

    /// Extends the current matching to a maximum one; returns its size.
    pub fn maximize(&mut self) -> usize {
        let mut seen = vec![false; self.values.len()];
        for x in 0..self.adj.len() {
            if self.var_match[x].is_none() {
                seen.iter_mut().for_each(|s| *s = false);
                self.augment(x, &mut seen);
            }
        }
        self.var_match.iter().filter(|m| m.is_some()).count()
    }

    pub fn matching(&self) -> Vec<Option<i64>> {
        self.var_match
            .iter()
            .map(|m| m.map(|k| self.values[k]))
            .collect()
    }

    /// Edges `(variable position, value)` that belong to no maximum
    /// matching. The matching must cover every variable.
    pub fn unsupported_edges(&self) -> Vec<(usize, i64)> {
        let n = self.adj.len();
        let m = self.values.len();
        let sink = n + m;
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n + m + 1];
        for (x, adj) in self.adj.iter().enumerate() {
            for &v in adj {
                if self.var_match[x] != Some(v) {
                    out[x].push(n + v);
                }
            }
        }
        for v in 0..m {
            match self.val_match[v] {
                Some(x) => {
                    out[n + v].push(x);
                    out[sink].push(n + v);
                }
                None => out[n + v].push(sink),
            }
        }
        let comp = strongly_connected_components(&out);
        let mut removed = Vec::new();
        for x in 0..n {
            for &v in &self.adj[x] {
                if self.var_match[x] != Some(v) && comp[x] != comp[n + v] {
                    removed.push((x, self.values[v]));
                }
            }
        }
        removed
    }
}

/// Tarjan's algorithm, iterative. Returns a component id per node.
fn strongly_connected_components(out: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = out.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut n_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(u, next)) = call.last() {
            if next < out[u].len() {
                let w = out[u][next];
                if let Some(top) = call.last_mut() {
                    top.1 += 1;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = n_comp;
                        if w == u {
                            break;
                        }
                    }
                    n_comp += 1;
                }
            }
        }
    }
    comp
}

/// True iff some matching assigns every variable a distinct value.
pub fn check_consistency(ad: &AlldiffConstraint, store: &DomainStore) -> bool {
    let mut g = ValueGraph::build(&ad.vars, store);
    g.maximize() == ad.vars.len()
}

/// Values that take part in no solution of the constraint on its own.
pub fn regin_prune(ad: &AlldiffConstraint, store: &DomainStore) -> Result<Vec<(VariableId, i64)>, AlldiffConflict> {
    AlldiffFilter::new(ad.clone()).prune(store)
}

/// Regin filtering that keeps the last matching between calls and only
/// repairs the variables whose matched value disappeared.
#[derive(Debug, Clone)]
pub struct AlldiffFilter {
    ad: AlldiffConstraint,
    cached: Vec<Option<i64>>,
}

impl AlldiffFilter {
    pub fn new(ad: AlldiffConstraint) -> Self {
        let cached = vec![None; ad.vars.len()];
        AlldiffFilter { ad, cached }
    }

    pub fn constraint(&self) -> &AlldiffConstraint {
        &self.ad
    }

    pub fn prune(&mut self, store: &DomainStore) -> Result<Vec<(VariableId, i64)>, AlldiffConflict> {
        let mut g = ValueGraph::build(&self.ad.vars, store);
        g.seed(&self.cached);
        let size = g.maximize();
        self.cached = g.matching();
        if size < self.ad.vars.len() {
            return Err(AlldiffConflict);
        }
        Ok(g
            .unsupported_edges()
            .into_iter()
            .map(|(x, v)| (self.ad.vars[x], v))
            .collect())
    }
}
