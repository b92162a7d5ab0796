//! Minimizing matchings and the corrections derived from them.
//!
//! For `e = a_1*x_1 + ... + a_n*x_n` with every `a_i > 0` and the `x_i`
//! pairwise distinct, the improved minimum is the smallest `e[d]` over
//! distinct values with `d_i >= min(x_i)`. It is found by sweeping values
//! upward and handing each value to the waiting variable with the largest
//! coefficient. Maxima of the domains are ignored, so the result is a valid
//! lower bound but not necessarily attained.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::domain::{DomainStore, VariableId};
use crate::linear::expr::{LinearExpression, Term};
use crate::linear::{floor_div, Direction, TermBound};

/// One assignment `var = value` of a matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchEntry {
    /// Position of the term in the expression the matching was built for.
    pub term: usize,
    pub var: VariableId,
    pub value: i64,
}

/// A minimizing (or, for the max variant, maximizing) matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprovedMinResult {
    /// `min*(e)`, or `max*(e)` for [`calculate_improved_maximum`].
    pub value: i64,
    /// Values strictly increase along the matching (strictly decrease for
    /// the max variant).
    pub matching: Vec<MatchEntry>,
    /// For each position, where the runner-up candidate for that value ended
    /// up in the matching. Always greater than the position itself.
    pub next_index: Vec<Option<usize>>,
}

/// The sweep on raw `(coefficient, start)` pairs: each value handed out is
/// at least the receiving item's start, values are distinct and increasing.
/// Returns the total, the `(item, value)` sequence and the runner-up
/// positions.
fn sweep(items: &[(i64, i64)]) -> (i64, Vec<(usize, i64)>, Vec<Option<usize>>) {
    let n = items.len();
    let mut order: Vec<(i64, usize)> = items.iter().enumerate().map(|(i, it)| (it.1, i)).collect();
    order.sort_unstable();

    let mut heap: BinaryHeap<(i64, Reverse<usize>)> = BinaryHeap::with_capacity(n);
    let mut assigned = Vec::with_capacity(n);
    let mut runner_up: Vec<Option<usize>> = Vec::with_capacity(n);
    let mut position_of = vec![usize::MAX; n];
    let mut total = 0i64;
    let mut next = 0usize;
    let mut d = match order.first() {
        Some(&(start, _)) => start - 1,
        None => 0,
    };

    for j in 0..n {
        d = (d + 1).max(order[j].0);
        while next < n && order[next].0 <= d {
            let i = order[next].1;
            heap.push((items[i].0, Reverse(i)));
            next += 1;
        }
        let (coef, Reverse(item)) = heap.pop().expect("sweep heap cannot be empty");
        total += coef * d;
        assigned.push((item, d));
        position_of[item] = j;
        runner_up.push(heap.peek().map(|&(_, Reverse(i))| i));
    }

    let next_index = runner_up
        .into_iter()
        .map(|r| r.map(|i| position_of[i]))
        .collect();
    (total, assigned, next_index)
}

fn require_positive(terms: &[Term]) {
    assert!(
        terms.iter().all(|t| t.coef > 0),
        "improved extremes need strictly positive coefficients"
    );
}

pub(crate) fn improved_minimum_of(terms: &[Term], store: &DomainStore) -> ImprovedMinResult {
    require_positive(terms);
    let items: Vec<(i64, i64)> = terms.iter().map(|t| (t.coef, store.min(t.var))).collect();
    let (value, assigned, next_index) = sweep(&items);
    let matching = assigned
        .into_iter()
        .map(|(i, d)| MatchEntry {
            term: i,
            var: terms[i].var,
            value: d,
        })
        .collect();
    ImprovedMinResult {
        value,
        matching,
        next_index,
    }
}

/// The max variant is the min sweep on negated values: sorting by
/// descending maximum and stepping values down from `max(M_i) + 1`.
pub(crate) fn improved_maximum_of(terms: &[Term], store: &DomainStore) -> ImprovedMinResult {
    require_positive(terms);
    let items: Vec<(i64, i64)> = terms
        .iter()
        .map(|t| (t.coef, -store.max(t.var)))
        .collect();
    let (value, assigned, next_index) = sweep(&items);
    let matching = assigned
        .into_iter()
        .map(|(i, d)| MatchEntry {
            term: i,
            var: terms[i].var,
            value: -d,
        })
        .collect();
    ImprovedMinResult {
        value: -value,
        matching,
        next_index,
    }
}

/// `min*(e)` with its minimizing matching. All coefficients must be
/// positive.
pub fn calculate_improved_minimum(expr: &LinearExpression, store: &DomainStore) -> ImprovedMinResult {
    improved_minimum_of(expr.terms(), store)
}

/// `max*(e)` with its maximizing matching. All coefficients must be
/// positive.
pub fn calculate_improved_maximum(expr: &LinearExpression, store: &DomainStore) -> ImprovedMinResult {
    improved_maximum_of(expr.terms(), store)
}

/// `c[j]` for every matching position, filled from the back:
/// `a_j * d_j` when nobody else wanted value `d_j`, otherwise
/// `(a_j - a_l) * d_j + c[l]` with `l` the runner-up's position.
pub(crate) fn corrections(terms: &[Term], imr: &ImprovedMinResult) -> Vec<i64> {
    let n = imr.matching.len();
    let mut c = vec![0i64; n];
    for j in (0..n).rev() {
        let entry = imr.matching[j];
        let a = terms[entry.term].coef;
        c[j] = match imr.next_index[j] {
            None => a * entry.value,
            Some(l) => {
                debug_assert!(l > j);
                let a_l = terms[imr.matching[l].term].coef;
                (a - a_l) * entry.value + c[l]
            }
        };
    }
    c
}

/// Output of [`corrections_and_bounds`], indexed by matching position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionBounds {
    pub corrections: Vec<i64>,
    /// Bounds in matching order.
    pub bounds: Vec<TermBound>,
}

/// Upper bounds for the variables of a positive group whose sum may not
/// exceed `budget`, from `x <= floor((budget - min*(e_x)) / a)` with
/// `min*(e_x) = min*(e) - c[j]`.
pub fn corrections_and_bounds(terms: &[Term], imr: &ImprovedMinResult, budget: i64) -> PartitionBounds {
    let corrections = corrections(terms, imr);
    let bounds = imr
        .matching
        .iter()
        .zip(&corrections)
        .map(|(entry, &c)| {
            let a = terms[entry.term].coef;
            let elided = imr.value - c;
            TermBound {
                var: entry.var,
                direction: Direction::Upper,
                value: floor_div(budget - elided, a),
                elided,
                correction: c,
            }
        })
        .collect();
    PartitionBounds {
        corrections,
        bounds,
    }
}
