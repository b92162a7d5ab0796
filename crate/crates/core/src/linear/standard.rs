use crate::domain::DomainStore;
use crate::linear::expr::{LinearExpression, NormalizedLinear, Relation, Term};
use crate::linear::{ceil_div, floor_div, BoundsResult, Direction, TermBound};

fn term_min(t: &Term, store: &DomainStore) -> i64 {
    if t.coef > 0 {
        t.coef * store.min(t.var)
    } else {
        t.coef * store.max(t.var)
    }
}

/// `min(e)`: the sum of per-term minima.
pub fn standard_min(expr: &LinearExpression, store: &DomainStore) -> i64 {
    expr.terms().iter().map(|t| term_min(t, store)).sum()
}

/// `max(e)`: the sum of per-term maxima.
pub fn standard_max(expr: &LinearExpression, store: &DomainStore) -> i64 {
    -standard_min(&expr.negated(), store)
}

/// Bounds for `e <= rhs` in terms of the expression as given.
fn bounds_le(expr: &LinearExpression, rhs: i64, store: &DomainStore) -> BoundsResult {
    let min_e = standard_min(expr, store);
    if min_e > rhs {
        return BoundsResult::inconsistent(min_e);
    }
    let bounds = expr
        .terms()
        .iter()
        .map(|t| {
            let contribution = term_min(t, store);
            let elided = min_e - contribution;
            let (direction, value) = if t.coef > 0 {
                (Direction::Upper, floor_div(rhs - elided, t.coef))
            } else {
                (Direction::Lower, ceil_div(rhs - elided, t.coef))
            };
            TermBound {
                var: t.var,
                direction,
                value,
                elided,
                correction: contribution,
            }
        })
        .collect();
    BoundsResult {
        consistent: true,
        extreme: min_e,
        bounds,
    }
}

/// The standard filter. `e >= c` is handled as `-e <= -c`, which yields
/// exactly the maximum-based bounds.
pub fn calculate_bounds_standard(c: &NormalizedLinear, store: &DomainStore) -> BoundsResult {
    match c.relation {
        Relation::Le => bounds_le(&c.expr, c.rhs, store),
        Relation::Ge => {
            let mut r = bounds_le(&c.expr.negated(), -c.rhs, store);
            r.extreme = -r.extreme;
            for b in &mut r.bounds {
                b.elided = -b.elided;
                b.correction = -b.correction;
            }
            r
        }
    }
}
