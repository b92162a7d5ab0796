//! The improved filter for arbitrary signs and partially overlapping
//! alldifferent constraints.

use crate::domain::DomainStore;
use crate::linear::expr::{LinearExpression, NormalizedLinear, Relation, Term};
use crate::linear::improved::{corrections, improved_maximum_of, improved_minimum_of};
use crate::linear::partition::{PartitionSet, Sign};
use crate::linear::{ceil_div, floor_div, BoundsResult, Direction, TermBound};

/// `e <= rhs` over the precomputed groups.
///
/// A positive group contributes `min*(e^k)`; a negative group contributes
/// `-max*(|e^k|)`. Each group then gets the budget
/// `b^k = rhs - (min*(e) - min*(e^k))` and its variables are bounded from
/// the corrected group minimum.
fn bounds_le(expr: &LinearExpression, rhs: i64, partitions: &PartitionSet, store: &DomainStore) -> BoundsResult {
    struct GroupRun {
        terms: Vec<Term>,
        positions: Vec<usize>,
        positive: bool,
        minimum: i64,
        imr: crate::linear::ImprovedMinResult,
    }

    let mut runs = Vec::with_capacity(partitions.len());
    let mut total = 0i64;
    for group in &partitions.groups {
        let positive = group.sign == Sign::Positive;
        let terms: Vec<Term> = group
            .terms
            .iter()
            .map(|&i| {
                let t = expr.terms()[i];
                debug_assert_eq!(Sign::of(t.coef), group.sign);
                Term::new(t.coef.abs(), t.var)
            })
            .collect();
        let (imr, minimum) = if positive {
            let imr = improved_minimum_of(&terms, store);
            let m = imr.value;
            (imr, m)
        } else {
            let imr = improved_maximum_of(&terms, store);
            let m = -imr.value;
            (imr, m)
        };
        total += minimum;
        runs.push(GroupRun {
            terms,
            positions: group.terms.clone(),
            positive,
            minimum,
            imr,
        });
    }

    if total > rhs {
        return BoundsResult::inconsistent(total);
    }

    let mut bounds: Vec<Option<TermBound>> = vec![None; expr.len()];
    for run in &runs {
        let others = total - run.minimum;
        let c = corrections(&run.terms, &run.imr);
        for (entry, &cj) in run.imr.matching.iter().zip(&c) {
            let position = run.positions[entry.term];
            let a = expr.terms()[position].coef;
            let bound = if run.positive {
                let elided = others + run.minimum - cj;
                TermBound {
                    var: entry.var,
                    direction: Direction::Upper,
                    value: floor_div(rhs - elided, a),
                    elided,
                    correction: cj,
                }
            } else {
                let elided = others + run.minimum + cj;
                TermBound {
                    var: entry.var,
                    direction: Direction::Lower,
                    value: ceil_div(rhs - elided, a),
                    elided,
                    correction: cj,
                }
            };
            bounds[position] = Some(bound);
        }
    }
    BoundsResult {
        consistent: true,
        extreme: total,
        bounds: bounds
            .into_iter()
            .map(|b| b.expect("partition does not cover every term"))
            .collect(),
    }
}

/// The improved filter over `c.partitions`. `e >= c` runs as `-e <= -c`,
/// which turns every `min*` into the matching `max*` construction.
pub fn calculate_bounds_improved_gen(c: &NormalizedLinear, store: &DomainStore) -> BoundsResult {
    match c.relation {
        Relation::Le => bounds_le(&c.expr, c.rhs, &c.partitions, store),
        Relation::Ge => {
            let mut r = bounds_le(&c.expr.negated(), -c.rhs, &c.partitions.negated(), store);
            r.extreme = -r.extreme;
            for b in &mut r.bounds {
                b.elided = -b.elided;
            }
            r
        }
    }
}
