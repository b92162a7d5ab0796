//! Splitting a linear expression into same-sign groups covered by
//! alldifferent constraints.

use std::collections::HashSet;

use crate::alldiff::AlldiffConstraint;
use crate::domain::VariableId;
use crate::linear::expr::LinearExpression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(coef: i64) -> Sign {
        if coef > 0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// One group of a [`PartitionSet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGroup {
    pub sign: Sign,
    /// Positions into the expression's terms, ascending.
    pub terms: Vec<usize>,
    pub vars: Vec<VariableId>,
    /// Id of the alldifferent covering the group, for groups of two or more.
    pub covering_ad: Option<usize>,
}

/// Disjoint groups covering every variable of an expression.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartitionSet {
    pub groups: Vec<PartitionGroup>,
}

impl PartitionSet {
    /// One singleton group per term, positives first.
    pub fn singletons(expr: &LinearExpression) -> Self {
        let mut groups = Vec::with_capacity(expr.len());
        for sign in [Sign::Positive, Sign::Negative] {
            for (i, t) in expr.terms().iter().enumerate() {
                if Sign::of(t.coef) == sign {
                    groups.push(PartitionGroup {
                        sign,
                        terms: vec![i],
                        vars: vec![t.var],
                        covering_ad: None,
                    });
                }
            }
        }
        PartitionSet { groups }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// The same groups for the negated expression.
    pub fn negated(&self) -> PartitionSet {
        let groups = self
            .groups
            .iter()
            .map(|g| PartitionGroup {
                sign: match g.sign {
                    Sign::Positive => Sign::Negative,
                    Sign::Negative => Sign::Positive,
                },
                ..g.clone()
            })
            .collect();
        PartitionSet { groups }
    }
}

/// Greedy partitioning: within the positive and then the negative
/// variables, repeatedly take the largest intersection with any
/// alldifferent (first in declaration order on ties) while it has at least
/// two members; whatever remains becomes singletons.
pub fn find_partitions(expr: &LinearExpression, alldiffs: &[AlldiffConstraint]) -> PartitionSet {
    let ad_sets: Vec<HashSet<VariableId>> = alldiffs
        .iter()
        .map(|ad| ad.vars.iter().copied().collect())
        .collect();
    let mut groups = Vec::new();

    for sign in [Sign::Positive, Sign::Negative] {
        let mut remaining: Vec<usize> = (0..expr.len())
            .filter(|&i| Sign::of(expr.terms()[i].coef) == sign)
            .collect();
        let candidates: Vec<usize> = (0..alldiffs.len())
            .filter(|&a| {
                remaining
                    .iter()
                    .any(|&i| ad_sets[a].contains(&expr.terms()[i].var))
            })
            .collect();

        while !remaining.is_empty() {
            let mut best: Option<(usize, usize)> = None;
            for &a in &candidates {
                let size = remaining
                    .iter()
                    .filter(|&&i| ad_sets[a].contains(&expr.terms()[i].var))
                    .count();
                if size > best.map_or(0, |(_, s)| s) {
                    best = Some((a, size));
                }
            }
            match best {
                Some((a, size)) if size >= 2 => {
                    let (taken, rest): (Vec<usize>, Vec<usize>) = remaining
                        .iter()
                        .partition(|&&i| ad_sets[a].contains(&expr.terms()[i].var));
                    groups.push(PartitionGroup {
                        sign,
                        vars: taken.iter().map(|&i| expr.terms()[i].var).collect(),
                        terms: taken,
                        covering_ad: Some(alldiffs[a].id),
                    });
                    remaining = rest;
                }
                _ => {
                    for &i in &remaining {
                        groups.push(PartitionGroup {
                            sign,
                            terms: vec![i],
                            vars: vec![expr.terms()[i].var],
                            covering_ad: None,
                        });
                    }
                    remaining.clear();
                }
            }
        }
    }
    PartitionSet { groups }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    fn ad(id: usize, vars: &[usize]) -> AlldiffConstraint {
        AlldiffConstraint::new(id, vars.iter().map(|&i| v(i)).collect()).unwrap()
    }

    fn group_vars(p: &PartitionSet) -> Vec<Vec<usize>> {
        p.groups
            .iter()
            .map(|g| g.vars.iter().map(|x| x.0).collect())
            .collect()
    }

    #[test]
    fn two_partial_alldifferents() {
        let e = LinearExpression::new((1..=7).map(|i| (1, v(i))));
        let p = find_partitions(&e, &[ad(0, &[1, 2, 3]), ad(1, &[5, 6, 7])]);
        assert_eq!(group_vars(&p), vec![vec![1, 2, 3], vec![5, 6, 7], vec![4]]);
        assert_eq!(p.groups[0].covering_ad, Some(0));
        assert_eq!(p.groups[1].covering_ad, Some(1));
        assert_eq!(p.groups[2].covering_ad, None);
    }

    #[test]
    fn no_alldifferents_gives_singletons() {
        let e = LinearExpression::new([(2, v(0)), (-1, v(1)), (3, v(2))]);
        let p = find_partitions(&e, &[]);
        assert_eq!(group_vars(&p), vec![vec![0], vec![2], vec![1]]);
        assert_eq!(p, PartitionSet::singletons(&e));
    }

    #[test]
    fn residual_intersection_of_one_is_a_singleton() {
        let e = LinearExpression::new((1..=4).map(|i| (1, v(i))));
        let p = find_partitions(&e, &[ad(0, &[1, 2, 3]), ad(1, &[3, 4])]);
        assert_eq!(group_vars(&p), vec![vec![1, 2, 3], vec![4]]);
    }

    #[test]
    fn signs_are_partitioned_separately() {
        let e = LinearExpression::new([(1, v(0)), (-1, v(1)), (2, v(2)), (-3, v(3))]);
        let p = find_partitions(&e, &[ad(0, &[0, 1, 2, 3])]);
        assert_eq!(group_vars(&p), vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(p.groups[1].sign, Sign::Negative);
    }

    #[test]
    fn equal_sized_intersections_prefer_first_declared() {
        let e = LinearExpression::new((0..4).map(|i| (1, v(i))));
        let p = find_partitions(&e, &[ad(7, &[2, 3]), ad(3, &[0, 1])]);
        assert_eq!(group_vars(&p), vec![vec![2, 3], vec![0, 1]]);
        assert_eq!(p.groups[0].covering_ad, Some(7));
    }
}
