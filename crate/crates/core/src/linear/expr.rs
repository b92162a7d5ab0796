use std::fmt;

use crate::domain::VariableId;
use crate::linear::partition::PartitionSet;

/// One monomial `coef * var`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub coef: i64,
    pub var: VariableId,
}

impl Term {
    pub fn new(coef: i64, var: VariableId) -> Self {
        Term { coef, var }
    }
}

/// A sum of monomials over distinct variables.
///
/// Term order is the order of first mention in the source and is used for
/// every tie-break in the filters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LinearExpression {
    terms: Vec<Term>,
}

impl LinearExpression {
    /// Merges repeated variables into one coefficient and drops zero terms.
    pub fn new<I: IntoIterator<Item = (i64, VariableId)>>(terms: I) -> Self {
        let mut merged: Vec<Term> = Vec::new();
        for (coef, var) in terms {
            match merged.iter_mut().find(|t| t.var == var) {
                Some(t) => t.coef += coef,
                None => merged.push(Term::new(coef, var)),
            }
        }
        merged.retain(|t| t.coef != 0);
        LinearExpression { terms: merged }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = VariableId> + '_ {
        self.terms.iter().map(|t| t.var)
    }

    /// The expression with term `index` elided.
    pub fn without(&self, index: usize) -> LinearExpression {
        let mut terms = self.terms.clone();
        terms.remove(index);
        LinearExpression { terms }
    }

    pub fn negated(&self) -> LinearExpression {
        LinearExpression {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(-t.coef, t.var))
                .collect(),
        }
    }

    pub fn evaluate(&self, value_of: impl Fn(VariableId) -> i64) -> i64 {
        self.terms.iter().map(|t| t.coef * value_of(t.var)).sum()
    }
}

/// Relation of a normalized linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
}

/// Relation as written in a model, before normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceRelation {
    Le,
    Ge,
    Eq,
    Lt,
    Gt,
}

impl SourceRelation {
    pub fn symbol(self) -> &'static str {
        match self {
            SourceRelation::Le => "<=",
            SourceRelation::Ge => ">=",
            SourceRelation::Eq => "=",
            SourceRelation::Lt => "<",
            SourceRelation::Gt => ">",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "<=" => SourceRelation::Le,
            ">=" => SourceRelation::Ge,
            "=" | "==" => SourceRelation::Eq,
            "<" => SourceRelation::Lt,
            ">" => SourceRelation::Gt,
            _ => return None,
        })
    }

    pub fn holds(self, lhs: i64, rhs: i64) -> bool {
        match self {
            SourceRelation::Le => lhs <= rhs,
            SourceRelation::Ge => lhs >= rhs,
            SourceRelation::Eq => lhs == rhs,
            SourceRelation::Lt => lhs < rhs,
            SourceRelation::Gt => lhs > rhs,
        }
    }

    /// Rewrites into `<=`/`>=` faces: `=` gives both, strict ones shift by one.
    pub fn normalize(self, rhs: i64) -> Vec<(Relation, i64)> {
        match self {
            SourceRelation::Le => vec![(Relation::Le, rhs)],
            SourceRelation::Ge => vec![(Relation::Ge, rhs)],
            SourceRelation::Eq => vec![(Relation::Le, rhs), (Relation::Ge, rhs)],
            SourceRelation::Lt => vec![(Relation::Le, rhs - 1)],
            SourceRelation::Gt => vec![(Relation::Ge, rhs + 1)],
        }
    }
}

impl fmt::Display for SourceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `expr <= rhs` or `expr >= rhs`, with its alldifferent partitioning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedLinear {
    pub expr: LinearExpression,
    pub relation: Relation,
    pub rhs: i64,
    pub partitions: PartitionSet,
}

impl NormalizedLinear {
    /// A constraint whose partitioning is all singletons.
    pub fn new(expr: LinearExpression, relation: Relation, rhs: i64) -> Self {
        let partitions = PartitionSet::singletons(&expr);
        NormalizedLinear {
            expr,
            relation,
            rhs,
            partitions,
        }
    }

    pub fn with_partitions(mut self, partitions: PartitionSet) -> Self {
        self.partitions = partitions;
        self
    }

    /// The same constraint as `<=`; `e >= c` becomes `-e <= -c`.
    pub fn as_le(&self) -> NormalizedLinear {
        match self.relation {
            Relation::Le => self.clone(),
            Relation::Ge => NormalizedLinear {
                expr: self.expr.negated(),
                relation: Relation::Le,
                rhs: -self.rhs,
                partitions: self.partitions.negated(),
            },
        }
    }

    /// Normalizes `expr rel rhs` into one or two records.
    pub fn from_source(expr: LinearExpression, rel: SourceRelation, rhs: i64) -> Vec<Self> {
        rel.normalize(rhs)
            .into_iter()
            .map(|(relation, rhs)| NormalizedLinear::new(expr.clone(), relation, rhs))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VariableId {
        VariableId(i)
    }

    #[test]
    fn duplicates_merge_and_zeros_drop() {
        let e = LinearExpression::new([(1, v(0)), (1, v(1)), (1, v(0)), (2, v(2)), (-2, v(2))]);
        assert_eq!(e.terms(), &[Term::new(2, v(0)), Term::new(1, v(1))]);
    }

    #[test]
    fn normalization_faces() {
        assert_eq!(
            SourceRelation::Eq.normalize(6),
            vec![(Relation::Le, 6), (Relation::Ge, 6)]
        );
        assert_eq!(SourceRelation::Lt.normalize(6), vec![(Relation::Le, 5)]);
        assert_eq!(SourceRelation::Gt.normalize(6), vec![(Relation::Ge, 7)]);
        let e = LinearExpression::new([(1, v(0))]);
        assert_eq!(NormalizedLinear::from_source(e, SourceRelation::Eq, 3).len(), 2);
    }

    #[test]
    fn relation_symbols_round_trip() {
        for r in [
            SourceRelation::Le,
            SourceRelation::Ge,
            SourceRelation::Eq,
            SourceRelation::Lt,
            SourceRelation::Gt,
        ] {
            assert_eq!(SourceRelation::parse(r.symbol()), Some(r));
        }
        assert_eq!(SourceRelation::parse("!="), None);
    }
}
