use adlin::alldiff::{regin_prune, AlldiffConstraint};
use adlin::domain::{DomainStore, FiniteDomain, VariableId};
use adlin::linear::{
    calculate_bounds_improved_gen, calculate_bounds_standard, calculate_improved_minimum,
    corrections_and_bounds, find_partitions, standard_min, Direction, LinearExpression,
    NormalizedLinear, Relation,
};
use adlin::oracle::{brute_min_distinct, brute_regin, OracleBudget};
use proptest::prelude::*;

/// `(coef, lo, width)` per term; every domain is `lo..=lo+width` inside a
/// 12-value window starting at `base`.
fn positive_terms() -> impl Strategy<Value = (i64, Vec<(i64, i64, i64)>)> {
    (-5i64..20, prop::collection::vec((1i64..=20, 0i64..12, 0i64..12), 1..=8))
}

fn build(base: i64, terms: &[(i64, i64, i64)]) -> (DomainStore, LinearExpression) {
    let mut s = DomainStore::new();
    let mut t = Vec::new();
    for &(a, off, w) in terms {
        let lo = base + off;
        let hi = (lo + w).min(base + 11);
        t.push((a, s.add_variable(FiniteDomain::interval(lo, hi))));
    }
    (s, LinearExpression::new(t))
}

fn mixed_terms() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec(
        ((1i64..=9).prop_flat_map(|a| prop_oneof![Just(a), Just(-a)]), -4i64..6, 0i64..8),
        1..=7,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn improved_minimum_is_the_exact_distinct_minimum((base, terms) in positive_terms()) {
        let (s, e) = build(base, &terms);
        let (coefs, mins): (Vec<i64>, Vec<i64>) = e.terms().iter().map(|t| (t.coef, s.min(t.var))).unzip();
        let brute = brute_min_distinct(&coefs, &mins, &OracleBudget::default()).unwrap();
        prop_assert_eq!(calculate_improved_minimum(&e, &s).value, brute);
    }

    #[test]
    fn corrections_give_elided_minimums((base, terms) in positive_terms(), slack in 0i64..200) {
        let (s, e) = build(base, &terms);
        let imr = calculate_improved_minimum(&e, &s);
        let pb = corrections_and_bounds(e.terms(), &imr, imr.value + slack);
        for (i, t) in e.terms().iter().enumerate() {
            let b = pb.bounds.iter().find(|b| b.var == t.var).unwrap();
            prop_assert_eq!(b.elided, calculate_improved_minimum(&e.without(i), &s).value);
        }
    }

    #[test]
    fn improved_minimum_dominates_standard((base, terms) in positive_terms()) {
        let (s, e) = build(base, &terms);
        prop_assert!(calculate_improved_minimum(&e, &s).value >= standard_min(&e, &s));
    }

    #[test]
    fn improved_bounds_are_tighter_and_keep_supported_values(
        terms in mixed_terms(),
        ge in any::<bool>(),
        rhs in -40i64..60,
        cut in 0usize..7,
    ) {
        let mut s = DomainStore::new();
        let vars: Vec<VariableId> = terms
            .iter()
            .map(|&(_, lo, w)| s.add_variable(FiniteDomain::interval(lo, lo + w)))
            .collect();
        let e = LinearExpression::new(terms.iter().map(|t| t.0).zip(vars.iter().copied()));
        let cut = cut.min(vars.len());
        let mut ads = Vec::new();
        if vars.len() - cut >= 2 {
            ads.push(AlldiffConstraint::new(0, vars[cut..].to_vec()).unwrap());
        }
        if cut >= 2 {
            ads.push(AlldiffConstraint::new(1, vars[..cut + 1.min(vars.len() - cut)].to_vec()).unwrap());
        }
        let rel = if ge { Relation::Ge } else { Relation::Le };
        let c = NormalizedLinear::new(e.clone(), rel, rhs).with_partitions(find_partitions(&e, &ads));
        let imp = calculate_bounds_improved_gen(&c, &s);
        let std = calculate_bounds_standard(&c, &s);
        if std.consistent && imp.consistent {
            for (a, b) in imp.bounds.iter().zip(&std.bounds) {
                prop_assert_eq!(a.direction, b.direction);
                match a.direction {
                    Direction::Upper => prop_assert!(a.value <= b.value),
                    Direction::Lower => prop_assert!(a.value >= b.value),
                }
            }
        }
        prop_assert!(std.consistent || !imp.consistent);

        // Every solution of the constraint plus the alldifferents survives.
        let domains: Vec<Vec<i64>> = vars.iter().map(|&x| s.domain(x).values().collect()).collect();
        let mut tuple = vec![0i64; vars.len()];
        let mut stack = vec![0usize];
        while let Some(&k) = stack.last() {
            let depth = stack.len() - 1;
            if k == domains[depth].len() {
                stack.pop();
                if let Some(top) = stack.last_mut() {
                    *top += 1;
                }
                continue;
            }
            tuple[depth] = domains[depth][k];
            if depth + 1 < vars.len() {
                stack.push(0);
                continue;
            }
            *stack.last_mut().unwrap() += 1;
            let distinct = ads.iter().all(|ad| {
                ad.vars.iter().enumerate().all(|(i, x)| ad.vars[i + 1..].iter().all(|y| tuple[x.0] != tuple[y.0]))
            });
            let lhs = e.evaluate(|x| tuple[x.0]);
            let holds = if ge { lhs >= rhs } else { lhs <= rhs };
            if distinct && holds {
                prop_assert!(imp.consistent);
                for b in &imp.bounds {
                    let v = tuple[b.var.0];
                    match b.direction {
                        Direction::Upper => prop_assert!(v <= b.value),
                        Direction::Lower => prop_assert!(v >= b.value),
                    }
                }
            }
        }
    }

    #[test]
    fn regin_keeps_exactly_the_supported_values(
        doms in prop::collection::vec(prop::collection::btree_set(1i64..=8, 1..=8), 2..=6)
    ) {
        let mut s = DomainStore::new();
        let vars: Vec<VariableId> = doms.iter().map(|d| s.add_variable(FiniteDomain::from_values(d.iter().copied()))).collect();
        let ad = AlldiffConstraint::new(0, vars.clone()).unwrap();
        let support = brute_regin(&ad, &s, &OracleBudget::default()).unwrap();
        match regin_prune(&ad, &s) {
            Err(_) => prop_assert!(support.iter().all(|v| v.is_empty())),
            Ok(removed) => {
                for (i, &x) in vars.iter().enumerate() {
                    let kept: Vec<i64> = s.domain(x).values().filter(|v| !removed.contains(&(x, *v))).collect();
                    prop_assert_eq!(&kept, &support[i]);
                }
            }
        }
    }
}
