#![allow(dead_code)]

use adlin::alldiff::AlldiffConstraint;
use adlin::domain::{DomainStore, FiniteDomain, VariableId};
use adlin::linear::{LinearExpression, SourceRelation};
use adlin::model::{DomainSpec, ProblemInstance};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Positive coefficients over up to 8 variables whose domains sit inside
/// one 12-value window.
pub fn random_min_instance(rng: &mut ChaCha8Rng) -> (DomainStore, LinearExpression) {
    let n = rng.gen_range(1..=8);
    let base = rng.gen_range(-6..=20);
    let mut store = DomainStore::new();
    let mut terms = Vec::with_capacity(n);
    for _ in 0..n {
        let lo = base + rng.gen_range(0..12);
        let hi = rng.gen_range(lo..base + 12);
        let x = store.add_variable(FiniteDomain::interval(lo, hi));
        terms.push((rng.gen_range(1..=20), x));
    }
    (store, LinearExpression::new(terms))
}

pub fn mins_of(expr: &LinearExpression, store: &DomainStore) -> (Vec<i64>, Vec<i64>) {
    expr.terms().iter().map(|t| (t.coef, store.min(t.var))).unzip()
}

fn random_domain(rng: &mut ChaCha8Rng) -> DomainSpec {
    if rng.gen_bool(0.6) {
        let lo = rng.gen_range(-3..=5);
        DomainSpec::Interval(lo, lo + rng.gen_range(0..8))
    } else {
        let mut pool: Vec<i64> = (-3..=8).collect();
        pool.shuffle(rng);
        pool.truncate(rng.gen_range(1..=8));
        pool.sort_unstable();
        DomainSpec::Values(pool)
    }
}

fn random_subset(rng: &mut ChaCha8Rng, vars: &[VariableId], min_len: usize) -> Vec<VariableId> {
    let mut v = vars.to_vec();
    v.shuffle(rng);
    v.truncate(rng.gen_range(min_len..=vars.len()));
    v
}

/// Up to 6 variables with domains of at most 8 values, overlapping
/// alldifferents and mixed-sign linear constraints whose right-hand sides
/// sit close to the value of a random assignment.
pub fn random_csp(rng: &mut ChaCha8Rng) -> ProblemInstance {
    let n = rng.gen_range(2..=6);
    let mut p = ProblemInstance::new();
    let vars: Vec<VariableId> = (0..n).map(|i| p.add_var(format!("v{i}"), random_domain(rng))).collect();
    let witness: Vec<i64> = p
        .variables
        .iter()
        .map(|v| {
            let vals: Vec<i64> = v.domain.to_domain().values().collect();
            *vals.choose(rng).unwrap()
        })
        .collect();

    for _ in 0..rng.gen_range(1..=3) {
        p.add_alldifferent(random_subset(rng, &vars, 2));
    }
    let rels = [
        SourceRelation::Le,
        SourceRelation::Ge,
        SourceRelation::Eq,
        SourceRelation::Lt,
        SourceRelation::Gt,
    ];
    for _ in 0..rng.gen_range(1..=3) {
        let scope = random_subset(rng, &vars, 1);
        let coefs: Vec<i64> = scope
            .iter()
            .map(|_| {
                let a = rng.gen_range(1..=5);
                if rng.gen_bool(0.3) {
                    -a
                } else {
                    a
                }
            })
            .collect();
        let lhs: i64 = coefs.iter().zip(&scope).map(|(a, x)| a * witness[x.0]).sum();
        let rel = *rels.choose(rng).unwrap();
        p.add_linear(coefs, scope, rel, lhs + rng.gen_range(-3..=3));
    }
    if rng.gen_bool(0.2) {
        let disjuncts = random_subset(rng, &vars, 1)
            .into_iter()
            .map(|x| (x, witness[x.0] + rng.gen_range(-2..=1)))
            .collect();
        p.add_bound_or(disjuncts);
    }
    p
}

/// One alldifferent over up to 6 variables with domains drawn from 1..8.
pub fn random_alldiff(rng: &mut ChaCha8Rng) -> (DomainStore, AlldiffConstraint) {
    let n = rng.gen_range(2..=6);
    let mut store = DomainStore::new();
    let vars = (0..n)
        .map(|_| {
            let mut vals: Vec<i64> = (1..=8).filter(|_| rng.gen_bool(0.45)).collect();
            if vals.is_empty() {
                vals.push(rng.gen_range(1..=8));
            }
            store.add_variable(FiniteDomain::from_values(vals))
        })
        .collect();
    (store, AlldiffConstraint::new(0, vars).unwrap())
}

pub fn sorted(mut v: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    v.sort();
    v
}
