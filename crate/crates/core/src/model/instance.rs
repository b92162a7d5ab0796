use std::collections::HashMap;

use crate::alldiff::AlldiffConstraint;
use crate::domain::{FiniteDomain, VariableId};
use crate::error::ModelError;
use crate::linear::{find_partitions, LinearExpression, NormalizedLinear, SourceRelation};
use crate::search::BoundDisjunction;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DomainSpec {
    Interval(i64, i64),
    Values(Vec<i64>),
}

impl DomainSpec {
    pub fn to_domain(&self) -> FiniteDomain {
        match self {
            DomainSpec::Interval(lo, hi) => FiniteDomain::interval(*lo, *hi),
            DomainSpec::Values(v) => FiniteDomain::from_values(v.iter().copied()),
        }
    }

    pub fn size(&self) -> u64 {
        self.to_domain().size()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarDecl {
    pub name: String,
    pub domain: DomainSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearSpec {
    pub coefs: Vec<i64>,
    pub vars: Vec<VariableId>,
    pub relation: SourceRelation,
    pub rhs: i64,
}

impl LinearSpec {
    pub fn expression(&self) -> LinearExpression {
        LinearExpression::new(self.coefs.iter().copied().zip(self.vars.iter().copied()))
    }

    pub fn lhs(&self, assignment: &[i64]) -> i64 {
        self.coefs
            .iter()
            .zip(&self.vars)
            .map(|(a, x)| a * assignment[x.0])
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    AllDifferent(Vec<VariableId>),
    Linear(LinearSpec),
    BoundOr(BoundDisjunction),
}

impl Constraint {
    pub fn vars(&self) -> Vec<VariableId> {
        match self {
            Constraint::AllDifferent(v) => v.clone(),
            Constraint::Linear(l) => l.vars.clone(),
            Constraint::BoundOr(b) => b.disjuncts.iter().map(|d| d.0).collect(),
        }
    }

    pub fn is_satisfied(&self, assignment: &[i64]) -> bool {
        match self {
            Constraint::AllDifferent(vars) => {
                let mut seen: Vec<i64> = vars.iter().map(|x| assignment[x.0]).collect();
                seen.sort_unstable();
                seen.windows(2).all(|w| w[0] != w[1])
            }
            Constraint::Linear(l) => l.relation.holds(l.lhs(assignment), l.rhs),
            Constraint::BoundOr(b) => b.disjuncts.iter().any(|&(x, k)| assignment[x.0] <= k),
        }
    }
}

/// Free-form provenance of an instance.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Metadata {
    pub family: Option<String>,
    pub seed: Option<u64>,
    pub size: Option<String>,
}

/// Variables with domains plus constraints over them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProblemInstance {
    pub variables: Vec<VarDecl>,
    pub constraints: Vec<Constraint>,
    pub meta: Metadata,
}

impl ProblemInstance {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, domain: DomainSpec) -> VariableId {
        self.variables.push(VarDecl {
            name: name.into(),
            domain,
        });
        VariableId(self.variables.len() - 1)
    }

    pub fn add_alldifferent(&mut self, vars: Vec<VariableId>) {
        self.constraints.push(Constraint::AllDifferent(vars));
    }

    pub fn add_linear(&mut self, coefs: Vec<i64>, vars: Vec<VariableId>, relation: SourceRelation, rhs: i64) {
        self.constraints.push(Constraint::Linear(LinearSpec {
            coefs,
            vars,
            relation,
            rhs,
        }));
    }

    pub fn add_bound_or(&mut self, disjuncts: Vec<(VariableId, i64)>) {
        self.constraints
            .push(Constraint::BoundOr(BoundDisjunction { disjuncts }));
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn var_by_name(&self, name: &str) -> Option<VariableId> {
        self.variables
            .iter()
            .position(|v| v.name == name)
            .map(VariableId)
    }

    pub fn name(&self, x: VariableId) -> &str {
        &self.variables[x.0].name
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let mut names = HashMap::new();
        for v in &self.variables {
            if names.insert(v.name.as_str(), ()).is_some() {
                return Err(ModelError::DuplicateVariable(v.name.clone()));
            }
            if v.domain.size() == 0 {
                return Err(ModelError::EmptyDomain(v.name.clone()));
            }
        }
        let n = self.variables.len();
        for c in &self.constraints {
            if let Some(x) = c.vars().into_iter().find(|x| x.0 >= n) {
                return Err(ModelError::UnknownVariable(format!("#{}", x.0)));
            }
            match c {
                Constraint::AllDifferent(vars) => {
                    AlldiffConstraint::new(0, vars.clone())?;
                }
                Constraint::Linear(l) if l.coefs.len() != l.vars.len() => {
                    return Err(ModelError::LinearArity {
                        coefs: l.coefs.len(),
                        vars: l.vars.len(),
                    });
                }
                Constraint::BoundOr(b) if b.disjuncts.is_empty() => {
                    return Err(ModelError::EmptyDisjunction);
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// True iff every value lies in its declared domain and every
    /// constraint holds.
    pub fn is_solution(&self, assignment: &[i64]) -> bool {
        assignment.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(assignment)
                .all(|(d, &v)| d.domain.to_domain().contains(v))
            && self.constraints.iter().all(|c| c.is_satisfied(assignment))
    }

    /// Alldifferent constraints, numbered by declaration order among them.
    pub fn alldifferents(&self) -> Vec<AlldiffConstraint> {
        self.constraints
            .iter()
            .filter_map(|c| match c {
                Constraint::AllDifferent(vars) => Some(vars.clone()),
                _ => None,
            })
            .enumerate()
            .map(|(id, vars)| AlldiffConstraint { id, vars })
            .collect()
    }

    /// Every linear constraint as `<=`/`>=` records with partitions attached.
    /// The faces of one source constraint share its partitioning.
    pub fn normalized_linears(&self) -> Vec<NormalizedLinear> {
        let alldiffs = self.alldifferents();
        let mut out = Vec::new();
        for c in &self.constraints {
            if let Constraint::Linear(l) = c {
                let expr = l.expression();
                let partitions = find_partitions(&expr, &alldiffs);
                for face in NormalizedLinear::from_source(expr, l.relation, l.rhs) {
                    out.push(face.with_partitions(partitions.clone()));
                }
            }
        }
        out
    }

    /// Human-readable assignment, one `name = value` per line.
    pub fn format_assignment(&self, assignment: &[i64]) -> String {
        self.variables
            .iter()
            .zip(assignment)
            .map(|(d, v)| format!("{} = {}\n", d.name, v))
            .collect()
    }
}
