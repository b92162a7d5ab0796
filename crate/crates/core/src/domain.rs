//! Variables, backtrackable finite domains and the trail.
//!
//! A domain is an interval `[lower, upper]` with a set of holes strictly
//! inside it. Every mutation goes through a [`DomainStore`], which logs the
//! old state on a chronological trail so that [`DomainStore::rollback`]
//! restores it exactly.

use std::collections::BTreeSet;
use std::fmt;

/// Dense index of a variable inside a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId(pub usize);

impl VariableId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Outcome of a single domain mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChangeReport {
    Unchanged,
    Tightened,
    Emptied,
}

impl ChangeReport {
    pub fn changed(self) -> bool {
        self != ChangeReport::Unchanged
    }
}

/// A finite set of integers stored as an interval with holes.
///
/// The empty domain is any state with `lower > upper`; it carries no holes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteDomain {
    lower: i64,
    upper: i64,
    holes: BTreeSet<i64>,
}

impl FiniteDomain {
    pub fn interval(lower: i64, upper: i64) -> Self {
        FiniteDomain {
            lower,
            upper,
            holes: BTreeSet::new(),
        }
    }

    /// Builds the smallest interval-with-holes representation of `values`.
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let set: BTreeSet<i64> = values.into_iter().collect();
        let (Some(&lower), Some(&upper)) = (set.first(), set.last()) else {
            return FiniteDomain::interval(1, 0);
        };
        let holes = (lower..=upper).filter(|v| !set.contains(v)).collect();
        FiniteDomain {
            lower,
            upper,
            holes,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }

    pub fn min(&self) -> i64 {
        self.lower
    }

    pub fn max(&self) -> i64 {
        self.upper
    }

    pub fn size(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.upper - self.lower + 1) as u64 - self.holes.len() as u64
        }
    }

    pub fn is_fixed(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, value: i64) -> bool {
        self.lower <= value && value <= self.upper && !self.holes.contains(&value)
    }

    pub fn holes(&self) -> impl Iterator<Item = i64> + '_ {
        self.holes.iter().copied()
    }

    /// Members in ascending order.
    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        (self.lower..=self.upper).filter(move |v| !self.holes.contains(v))
    }
}

impl fmt::Display for FiniteDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        if self.holes.is_empty() {
            return write!(f, "{}..{}", self.lower, self.upper);
        }
        let values: Vec<String> = self.values().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", values.join(","))
    }
}

#[derive(Debug, Clone, Copy)]
enum TrailEntry {
    Lower { var: usize, old: i64 },
    Upper { var: usize, old: i64 },
    HoleAdded { var: usize, value: i64 },
    HoleDropped { var: usize, value: i64 },
}

/// Position in the trail produced by [`DomainStore::checkpoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mark {
    depth: usize,
    trail_len: usize,
}

/// Per-variable domains plus the trail that makes them backtrackable.
#[derive(Debug, Clone, Default)]
pub struct DomainStore {
    domains: Vec<FiniteDomain>,
    trail: Vec<TrailEntry>,
    marks: Vec<usize>,
    /// Variables touched since the last [`DomainStore::drain_modified`].
    modified: Vec<VariableId>,
    modified_flag: Vec<bool>,
}

impl DomainStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, domain: FiniteDomain) -> VariableId {
        let id = VariableId(self.domains.len());
        self.domains.push(domain);
        self.modified_flag.push(false);
        id
    }

    pub fn num_variables(&self) -> usize {
        self.domains.len()
    }

    pub fn variables(&self) -> impl Iterator<Item = VariableId> {
        (0..self.domains.len()).map(VariableId)
    }

    pub fn domain(&self, x: VariableId) -> &FiniteDomain {
        &self.domains[x.0]
    }

    pub fn min(&self, x: VariableId) -> i64 {
        self.domains[x.0].lower
    }

    pub fn max(&self, x: VariableId) -> i64 {
        self.domains[x.0].upper
    }

    pub fn size(&self, x: VariableId) -> u64 {
        self.domains[x.0].size()
    }

    pub fn is_fixed(&self, x: VariableId) -> bool {
        self.domains[x.0].is_fixed()
    }

    pub fn contains(&self, x: VariableId, value: i64) -> bool {
        self.domains[x.0].contains(value)
    }

    pub fn any_empty(&self) -> bool {
        self.domains.iter().any(FiniteDomain::is_empty)
    }

    fn touch(&mut self, x: usize) {
        if !self.modified_flag[x] {
            self.modified_flag[x] = true;
            self.modified.push(VariableId(x));
        }
    }

    /// Returns the variables modified since the previous call, in
    /// modification order.
    pub fn drain_modified(&mut self) -> Vec<VariableId> {
        for x in &self.modified {
            self.modified_flag[x.0] = false;
        }
        std::mem::take(&mut self.modified)
    }

    fn set_lower(&mut self, x: usize, value: i64) {
        let old = self.domains[x].lower;
        self.trail.push(TrailEntry::Lower { var: x, old });
        self.domains[x].lower = value;
    }

    fn set_upper(&mut self, x: usize, value: i64) {
        let old = self.domains[x].upper;
        self.trail.push(TrailEntry::Upper { var: x, old });
        self.domains[x].upper = value;
    }

    fn drop_holes_outside(&mut self, x: usize) {
        loop {
            let d = &self.domains[x];
            let first = d.holes.first().copied();
            let stale = if d.is_empty() {
                first
            } else {
                first
                    .filter(|&h| h <= d.lower)
                    .or_else(|| d.holes.last().copied().filter(|&h| h >= d.upper))
            };
            let Some(value) = stale else { break };
            self.domains[x].holes.remove(&value);
            self.trail.push(TrailEntry::HoleDropped { var: x, value });
        }
    }

    fn empty_out(&mut self, x: usize) {
        let lower = self.domains[x].lower;
        self.set_upper(x, lower - 1);
        self.drop_holes_outside(x);
    }

    /// Removes every value greater than `bound`.
    pub fn tighten_upper(&mut self, x: VariableId, bound: i64) -> ChangeReport {
        let i = x.0;
        let d = &self.domains[i];
        if d.is_empty() || bound >= d.upper {
            return ChangeReport::Unchanged;
        }
        if bound < d.lower {
            self.touch(i);
            self.empty_out(i);
            return ChangeReport::Emptied;
        }
        let mut new_upper = bound;
        while d.holes.contains(&new_upper) {
            new_upper -= 1;
        }
        self.touch(i);
        self.set_upper(i, new_upper);
        self.drop_holes_outside(i);
        ChangeReport::Tightened
    }

    /// Removes every value smaller than `bound`.
    pub fn tighten_lower(&mut self, x: VariableId, bound: i64) -> ChangeReport {
        let i = x.0;
        let d = &self.domains[i];
        if d.is_empty() || bound <= d.lower {
            return ChangeReport::Unchanged;
        }
        if bound > d.upper {
            self.touch(i);
            self.empty_out(i);
            return ChangeReport::Emptied;
        }
        let mut new_lower = bound;
        while d.holes.contains(&new_lower) {
            new_lower += 1;
        }
        self.touch(i);
        self.set_lower(i, new_lower);
        self.drop_holes_outside(i);
        ChangeReport::Tightened
    }

    pub fn remove_value(&mut self, x: VariableId, value: i64) -> ChangeReport {
        let i = x.0;
        let d = &self.domains[i];
        if !d.contains(value) {
            return ChangeReport::Unchanged;
        }
        if d.is_fixed() {
            self.touch(i);
            self.empty_out(i);
            return ChangeReport::Emptied;
        }
        if value == d.lower {
            return self.tighten_lower(x, value + 1);
        }
        if value == d.upper {
            return self.tighten_upper(x, value - 1);
        }
        self.touch(i);
        self.domains[i].holes.insert(value);
        self.trail.push(TrailEntry::HoleAdded { var: i, value });
        ChangeReport::Tightened
    }

    /// Restricts `x` to the single value `value`.
    pub fn assign(&mut self, x: VariableId, value: i64) -> ChangeReport {
        if !self.contains(x, value) {
            if self.domains[x.0].is_empty() {
                return ChangeReport::Unchanged;
            }
            self.touch(x.0);
            self.empty_out(x.0);
            return ChangeReport::Emptied;
        }
        let lo = self.tighten_lower(x, value);
        let hi = self.tighten_upper(x, value);
        if lo.changed() || hi.changed() {
            ChangeReport::Tightened
        } else {
            ChangeReport::Unchanged
        }
    }

    pub fn checkpoint(&mut self) -> Mark {
        self.marks.push(self.trail.len());
        Mark {
            depth: self.marks.len(),
            trail_len: self.trail.len(),
        }
    }

    /// Undoes every mutation made since `mark` was taken.
    ///
    /// Marks are strictly LIFO; passing anything but the most recent live
    /// mark is a contract violation and panics.
    pub fn rollback(&mut self, mark: Mark) {
        assert_eq!(
            self.marks.len(),
            mark.depth,
            "rollback with a mark that is not the innermost checkpoint"
        );
        assert_eq!(self.marks.last(), Some(&mark.trail_len), "foreign mark");
        self.marks.pop();
        while self.trail.len() > mark.trail_len {
            match self.trail.pop().expect("trail shorter than mark") {
                TrailEntry::Lower { var, old } => self.domains[var].lower = old,
                TrailEntry::Upper { var, old } => self.domains[var].upper = old,
                TrailEntry::HoleAdded { var, value } => {
                    self.domains[var].holes.remove(&value);
                }
                TrailEntry::HoleDropped { var, value } => {
                    self.domains[var].holes.insert(value);
                }
            }
        }
        for x in std::mem::take(&mut self.modified) {
            self.modified_flag[x.0] = false;
        }
    }

    pub fn depth(&self) -> usize {
        self.marks.len()
    }

    pub fn trail_len(&self) -> usize {
        self.trail.len()
    }

    /// Snapshot of every domain, mainly for tests and oracles.
    pub fn snapshot(&self) -> Vec<FiniteDomain> {
        self.domains.clone()
    }
}
