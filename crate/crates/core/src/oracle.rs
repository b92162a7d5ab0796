//! Exhaustive reference implementations.
//!
//! Nothing here reuses the filtering code; every answer comes from plain
//! enumeration so that it can be used to check the filters.

use crate::alldiff::AlldiffConstraint;
use crate::domain::DomainStore;
use crate::error::OracleError;
use crate::model::{Constraint, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vars: usize,
    pub max_domain_size: u64,
    /// Width of the value window `brute_min_distinct` may search.
    pub max_value_range: i64,
    /// Enumeration nodes visited before giving up.
    pub max_tuples: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vars: 8,
            max_domain_size: 12,
            max_value_range: 32,
            max_tuples: 10_000_000,
        }
    }
}

fn over(what: String) -> OracleError {
    OracleError::BudgetExceeded(what)
}

/// Minimum of `sum a_i * d_i` over pairwise distinct `d_i >= mins[i]`.
///
/// Some optimum uses only values in `[min(mins), max(mins) + n - 1]`, so
/// the search is confined to that window. Coefficients must be positive.
pub fn brute_min_distinct(coefs: &[i64], mins: &[i64], budget: &OracleBudget) -> Result<i64, OracleError> {
    assert_eq!(coefs.len(), mins.len());
    assert!(coefs.iter().all(|&a| a > 0), "coefficients must be positive");
    let n = coefs.len();
    if n == 0 {
        return Ok(0);
    }
    if n > budget.max_vars {
        return Err(over(format!("{n} variables")));
    }
    let lo = *mins.iter().min().unwrap();
    let hi = *mins.iter().max().unwrap() + n as i64 - 1;
    if hi - lo + 1 > budget.max_value_range {
        return Err(over(format!("value window {lo}..{hi}")));
    }

    struct Search<'a> {
        coefs: &'a [i64],
        mins: &'a [i64],
        hi: i64,
        used: Vec<i64>,
        best: i64,
        nodes: u64,
        limit: u64,
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, partial: i64) -> bool {
            self.nodes += 1;
            if self.nodes > self.limit {
                return false;
            }
            if i == self.coefs.len() {
                self.best = self.best.min(partial);
                return true;
            }
            let rest: i64 = (i..self.coefs.len()).map(|k| self.coefs[k] * self.mins[k]).sum();
            if partial + rest >= self.best {
                return true;
            }
            for d in self.mins[i]..=self.hi {
                if self.used.contains(&d) {
                    continue;
                }
                self.used.push(d);
                let ok = self.go(i + 1, partial + self.coefs[i] * d);
                self.used.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let mut s = Search {
        coefs,
        mins,
        hi,
        used: Vec::with_capacity(n),
        best: i64::MAX,
        nodes: 0,
        limit: budget.max_tuples,
    };
    if !s.go(0, 0) {
        return Err(over(format!("more than {} nodes", budget.max_tuples)));
    }
    Ok(s.best)
}

/// Every assignment satisfying every constraint, in lexicographic order of
/// values. Constraints are evaluated as soon as all their variables are
/// set, and alldifferents also on partial assignments.
pub fn brute_solutions(problem: &ProblemInstance, budget: &OracleBudget) -> Result<Vec<Vec<i64>>, OracleError> {
    let n = problem.variables.len();
    if n > budget.max_vars {
        return Err(over(format!("{n} variables")));
    }
    let domains: Vec<Vec<i64>> = problem
        .variables
        .iter()
        .map(|v| {
            let mut vals: Vec<i64> = v.domain.to_domain().values().collect();
            vals.sort_unstable();
            vals
        })
        .collect();
    if let Some(d) = domains.iter().find(|d| d.len() as u64 > budget.max_domain_size) {
        return Err(over(format!("domain of {} values", d.len())));
    }

    // Constraints become checkable once their last variable is assigned.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, c) in problem.constraints.iter().enumerate() {
        match c.vars().iter().map(|x| x.0).max() {
            Some(last) => ready[last].push(k),
            None => {
                if !c.is_satisfied(&vec![0; n]) {
                    return Ok(Vec::new());
                }
            }
        }
    }

    let partial_ok = |c: &Constraint, values: &[i64], depth: usize| -> bool {
        match c {
            Constraint::AllDifferent(vars) => {
                let set: Vec<i64> = vars.iter().filter(|x| x.0 <= depth).map(|x| values[x.0]).collect();
                (0..set.len()).all(|i| (i + 1..set.len()).all(|j| set[i] != set[j]))
            }
            _ => true,
        }
    };

    let mut out = Vec::new();
    let mut values = vec![0i64; n];
    let mut nodes = 0u64;
    let mut idx = vec![0usize; n];
    let mut depth = 0usize;
    if n == 0 {
        return Ok(if problem.is_solution(&[]) { vec![Vec::new()] } else { Vec::new() });
    }
    loop {
        if idx[depth] == domains[depth].len() {
            if depth == 0 {
                break;
            }
            idx[depth] = 0;
            depth -= 1;
            idx[depth] += 1;
            continue;
        }
        nodes += 1;
        if nodes > budget.max_tuples {
            return Err(over(format!("more than {} nodes", budget.max_tuples)));
        }
        values[depth] = domains[depth][idx[depth]];
        let ok = problem
            .constraints
            .iter()
            .filter(|c| matches!(c, Constraint::AllDifferent(_)))
            .all(|c| partial_ok(c, &values, depth))
            && ready[depth]
                .iter()
                .all(|&k| problem.constraints[k].is_satisfied(&values));
        if !ok {
            idx[depth] += 1;
        } else if depth + 1 == n {
            out.push(values.clone());
            idx[depth] += 1;
        } else {
            depth += 1;
        }
    }
    Ok(out)
}

/// For each variable of `ad`, the sorted values it takes in some
/// assignment of pairwise distinct values from the current domains.
pub fn brute_regin(ad: &AlldiffConstraint, store: &DomainStore, budget: &OracleBudget) -> Result<Vec<Vec<i64>>, OracleError> {
    let n = ad.vars.len();
    if n > budget.max_vars {
        return Err(over(format!("{n} variables")));
    }
    let domains: Vec<Vec<i64>> = ad.vars.iter().map(|&x| store.domain(x).values().collect()).collect();
    if let Some(d) = domains.iter().find(|d| d.len() as u64 > budget.max_domain_size) {
        return Err(over(format!("domain of {} values", d.len())));
    }

    fn go(
        i: usize,
        domains: &[Vec<i64>],
        chosen: &mut Vec<i64>,
        support: &mut [Vec<i64>],
        nodes: &mut u64,
        limit: u64,
    ) -> bool {
        *nodes += 1;
        if *nodes > limit {
            return false;
        }
        if i == domains.len() {
            for (k, &v) in chosen.iter().enumerate() {
                if !support[k].contains(&v) {
                    support[k].push(v);
                }
            }
            return true;
        }
        for &v in &domains[i] {
            if chosen.contains(&v) {
                continue;
            }
            chosen.push(v);
            let ok = go(i + 1, domains, chosen, support, nodes, limit);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    let mut support = vec![Vec::new(); n];
    let mut nodes = 0;
    if !go(0, &domains, &mut Vec::new(), &mut support, &mut nodes, budget.max_tuples) {
        return Err(over(format!("more than {} nodes", budget.max_tuples)));
    }
    for s in &mut support {
        s.sort_unstable();
    }
    Ok(support)
}
