//! Bound filtering for normalized linear constraints.
//!
//! Two filters share one result type: the standard filter, which bounds
//! each variable from the plain minimum (or maximum) of the rest of the
//! expression, and the improved filter, which uses alldifferent-aware
//! minimizing matchings to get a larger minimum. Filters are pure: they read
//! a [`DomainStore`](crate::domain::DomainStore) and report bounds, leaving
//! domain mutation to the caller.
//!
//! All arithmetic is on `i64`. Values and coefficients are expected to stay
//! within `|v| <= 2^31` and expressions short enough that no partial sum
//! overflows.

pub mod expr;
pub mod general;
pub mod improved;
pub mod partition;
pub mod standard;

use crate::domain::VariableId;

pub use expr::{LinearExpression, NormalizedLinear, Relation, SourceRelation, Term};
pub use general::calculate_bounds_improved_gen;
pub use improved::{
    calculate_improved_maximum, calculate_improved_minimum, corrections_and_bounds,
    ImprovedMinResult, MatchEntry, PartitionBounds,
};
pub use partition::{find_partitions, PartitionGroup, PartitionSet, Sign};
pub use standard::{calculate_bounds_standard, standard_max, standard_min};

/// `floor(n / d)` rounding toward negative infinity.
pub fn floor_div(n: i64, d: i64) -> i64 {
    let q = n / d;
    if n % d != 0 && ((n < 0) != (d < 0)) {
        q - 1
    } else {
        q
    }
}

/// `ceil(n / d)` rounding toward positive infinity.
pub fn ceil_div(n: i64, d: i64) -> i64 {
    -floor_div(-n, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Upper,
    Lower,
}

/// Bound derived for one term of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermBound {
    pub var: VariableId,
    pub direction: Direction,
    pub value: i64,
    /// Minimum (for `<=`) or maximum (for `>=`) of the rest of the
    /// expression once this term is elided.
    pub elided: i64,
    /// Amount subtracted from the extreme of the term's group to get the
    /// extreme of the group without the term.
    pub correction: i64,
}

/// Result of one filter invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsResult {
    pub consistent: bool,
    /// Minimum of the expression for `<=`, maximum for `>=`.
    pub extreme: i64,
    /// One entry per term, in term order; empty when inconsistent.
    pub bounds: Vec<TermBound>,
}

impl BoundsResult {
    pub fn inconsistent(extreme: i64) -> Self {
        BoundsResult {
            consistent: false,
            extreme,
            bounds: Vec::new(),
        }
    }

    pub fn bound_for(&self, var: VariableId) -> Option<&TermBound> {
        self.bounds.iter().find(|b| b.var == var)
    }
}

/// Which linear filter a propagator runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterMode {
    Standard,
    Improved,
}

impl FilterMode {
    pub fn name(self) -> &'static str {
        match self {
            FilterMode::Standard => "standard",
            FilterMode::Improved => "improved",
        }
    }

    pub fn filter(self, c: &NormalizedLinear, store: &crate::domain::DomainStore) -> BoundsResult {
        match self {
            FilterMode::Standard => calculate_bounds_standard(c, store),
            FilterMode::Improved => calculate_bounds_improved_gen(c, store),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;
    use proptest::prelude::*;

    #[test]
    fn division_rounding_with_signs() {
        assert_eq!(floor_div(7, 2), 3);
        assert_eq!(floor_div(-7, 2), -4);
        assert_eq!(floor_div(7, -2), -4);
        assert_eq!(floor_div(-7, -2), 3);
        assert_eq!(ceil_div(7, 2), 4);
        assert_eq!(ceil_div(-7, 2), -3);
        assert_eq!(ceil_div(-6, -3), 2);
        assert_eq!(floor_div(0, -5), 0);
    }

    proptest! {
        #[test]
        fn floor_and_ceil_match_rationals(n in -10_000i64..10_000, d in -200i64..200) {
            prop_assume!(d != 0);
            let r = Rational64::new(n, d);
            prop_assert_eq!(floor_div(n, d), r.floor().to_integer());
            prop_assert_eq!(ceil_div(n, d), r.ceil().to_integer());
        }
    }
}
