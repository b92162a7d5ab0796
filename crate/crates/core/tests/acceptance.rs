//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use adlin::alldiff::{regin_prune, AlldiffConstraint};
use adlin::domain::{DomainStore, FiniteDomain, VariableId};
use adlin::linear::{
    calculate_bounds_improved_gen, calculate_bounds_standard, calculate_improved_minimum,
    corrections_and_bounds, find_partitions, LinearExpression, NormalizedLinear, Relation,
    SourceRelation,
};
use adlin::model::{encode_crypto, encode_kakuro, encode_magic, gen_crypto, gen_kakuro, gen_magic, DomainSpec, ProblemInstance};
use adlin::oracle::{brute_min_distinct, brute_regin, brute_solutions, OracleBudget};
use adlin::search::{solve, SearchStats, SolveOutcome, Solver, SolverConfig, VarOrder};
use adlin::FilterMode;
use common::{mins_of, random_alldiff, random_csp, random_min_instance, sorted};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn six_terms() -> (DomainStore, LinearExpression) {
    let mut s = DomainStore::new();
    let x: Vec<VariableId> = [(1, 10), (2, 10), (1, 10), (3, 10), (3, 15), (9, 40)]
        .iter()
        .map(|&(lo, hi)| s.add_variable(FiniteDomain::interval(lo, hi)))
        .collect();
    let e = LinearExpression::new([6, 8, 7, 4, 2, 1].into_iter().zip(x));
    (s, e)
}

fn standard_six_terms() -> Outcome {
    let (s, e) = six_terms();
    let r = calculate_bounds_standard(&NormalizedLinear::new(e, Relation::Le, 85), &s);
    let elided: Vec<i64> = r.bounds.iter().map(|b| b.elided).collect();
    let ub: Vec<i64> = r.bounds.iter().map(|b| b.value).collect();
    check(
        r.consistent && r.extreme == 56 && elided == [50, 40, 49, 44, 50, 47] && ub == [5, 5, 5, 10, 17, 38],
        format!("min {} elided {elided:?} bounds {ub:?}", r.extreme),
    )
}

fn improved_six_terms() -> Outcome {
    let (s, e) = six_terms();
    let imr = calculate_improved_minimum(&e, &s);
    let matching: Vec<(usize, i64)> = imr.matching.iter().map(|m| (m.var.0 + 1, m.value)).collect();
    let next: Vec<Option<usize>> = imr.next_index.iter().map(|p| p.map(|i| i + 1)).collect();
    let pb = corrections_and_bounds(e.terms(), &imr, 85);
    let per_var = |f: &dyn Fn(&adlin::linear::TermBound) -> i64| -> Vec<i64> {
        (0..6).map(|i| f(pb.bounds.iter().find(|b| b.var.0 == i).unwrap())).collect()
    };
    let corr = per_var(&|b| b.correction);
    let elided = per_var(&|b| b.elided);
    let ub = per_var(&|b| b.value);

    // The full filter with one alldifferent over every term agrees.
    let ad = AlldiffConstraint::new(0, e.vars().collect()).unwrap();
    let c = NormalizedLinear::new(e.clone(), Relation::Le, 85).with_partitions(find_partitions(&e, &[ad]));
    let full: Vec<i64> = calculate_bounds_improved_gen(&c, &s).bounds.iter().map(|b| b.value).collect();

    check(
        imr.value == 76
            && matching == [(3, 1), (2, 2), (1, 3), (4, 4), (5, 5), (6, 9)]
            && next == [Some(3), Some(3), Some(4), Some(5), None, None]
            && corr == [24, 28, 25, 18, 10, 9]
            && elided == [52, 48, 51, 58, 66, 67]
            && ub == [5, 4, 4, 6, 9, 18]
            && full == ub,
        format!("min* {} matching {matching:?} next {next:?} corrections {corr:?} elided {elided:?} bounds {ub:?}", imr.value),
    )
}

fn three_cell_sum() -> Outcome {
    let mut p = ProblemInstance::new();
    let v: Vec<VariableId> = ["x", "y", "z"].iter().map(|n| p.add_var(*n, DomainSpec::Interval(1, 9))).collect();
    p.add_alldifferent(v.clone());
    p.add_linear(vec![1, 1, 1], v.clone(), SourceRelation::Eq, 6);
    let root_max = |mode| {
        let mut s = Solver::new(&p, &SolverConfig::new(mode)).unwrap();
        assert!(s.propagate_root());
        v.iter().map(|&x| (s.store().min(x), s.store().max(x))).collect::<Vec<_>>()
    };
    let imp = root_max(FilterMode::Improved);
    let std = root_max(FilterMode::Standard);
    check(
        imp.iter().all(|&d| d == (1, 3)) && std.iter().all(|&d| d == (1, 4)),
        format!("improved {imp:?} standard {std:?}"),
    )
}

fn two_partial_alldifferents() -> Outcome {
    let mut s = DomainStore::new();
    let x: Vec<VariableId> = (0..7).map(|_| s.add_variable(FiniteDomain::interval(1, 10))).collect();
    let e = LinearExpression::new(x.iter().map(|&v| (1, v)));
    let ads = [
        AlldiffConstraint::new(0, x[0..3].to_vec()).unwrap(),
        AlldiffConstraint::new(1, x[4..7].to_vec()).unwrap(),
    ];
    let c = NormalizedLinear::new(e.clone(), Relation::Le, 15).with_partitions(find_partitions(&e, &ads));
    let imp: Vec<i64> = calculate_bounds_improved_gen(&c, &s).bounds.iter().map(|b| b.value).collect();
    let std: Vec<i64> = calculate_bounds_standard(&c, &s).bounds.iter().map(|b| b.value).collect();
    check(
        imp == [5, 5, 5, 3, 5, 5, 5] && std == [9; 7],
        format!("improved {imp:?} standard {std:?}"),
    )
}

const MIN_CORPUS: u64 = 1000;

fn min_corpus() -> impl Iterator<Item = (DomainStore, LinearExpression)> {
    (0..MIN_CORPUS).map(|seed| random_min_instance(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn improved_minimum_oracle() -> Outcome {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let mut mismatches = 0;
    for (s, e) in min_corpus() {
        let (coefs, mins) = mins_of(&e, &s);
        if brute_min_distinct(&coefs, &mins, &budget).unwrap() != calculate_improved_minimum(&e, &s).value {
            mismatches += 1;
        }
    }
    let t = start.elapsed();
    check(
        mismatches == 0 && t < Duration::from_secs(120),
        format!("{MIN_CORPUS} instances, {mismatches} mismatches, {t:.2?}"),
    )
}

fn corrections_oracle() -> Outcome {
    let mut mismatches = 0;
    let mut checked = 0;
    for (s, e) in min_corpus() {
        let imr = calculate_improved_minimum(&e, &s);
        let pb = corrections_and_bounds(e.terms(), &imr, imr.value);
        for (i, t) in e.terms().iter().enumerate() {
            let b = pb.bounds.iter().find(|b| b.var == t.var).unwrap();
            checked += 1;
            if b.elided != calculate_improved_minimum(&e.without(i), &s).value {
                mismatches += 1;
            }
        }
    }
    check(mismatches == 0, format!("{checked} elided minimums, {mismatches} mismatches"))
}

fn filtering_soundness() -> Outcome {
    let budget = OracleBudget::default();
    let mut bad = Vec::new();
    let mut total = 0;
    for seed in 0..300u64 {
        let p = random_csp(&mut ChaCha8Rng::seed_from_u64(seed));
        let brute = sorted(brute_solutions(&p, &budget).unwrap());
        total += brute.len();
        for mode in [FilterMode::Standard, FilterMode::Improved] {
            let found = Solver::new(&p, &SolverConfig::new(mode)).unwrap().solve_all().unwrap();
            if sorted(found) != brute {
                bad.push((seed, mode.name()));
            }
        }
    }
    check(bad.is_empty(), format!("300 instances, {total} solutions, mismatches {bad:?}"))
}

fn regin_oracle() -> Outcome {
    let budget = OracleBudget::default();
    let mut bad = Vec::new();
    for seed in 0..300u64 {
        let (s, ad) = random_alldiff(&mut ChaCha8Rng::seed_from_u64(seed));
        let support = brute_regin(&ad, &s, &budget).unwrap();
        let kept: Option<Vec<Vec<i64>>> = regin_prune(&ad, &s).ok().map(|removed| {
            ad.vars
                .iter()
                .map(|&x| s.domain(x).values().filter(|&v| !removed.contains(&(x, v))).collect())
                .collect()
        });
        let agree = match kept {
            Some(k) => k == support,
            None => support.iter().all(|v| v.is_empty()),
        };
        if !agree {
            bad.push(seed);
        }
    }
    check(bad.is_empty(), format!("300 instances, mismatching seeds {bad:?}"))
}

struct KakuroRun {
    standard: SearchStats,
    improved: SearchStats,
}

fn kakuro_corpus() -> (Vec<KakuroRun>, Duration) {
    let start = Instant::now();
    let grids = (0..50u64)
        .map(|seed| gen_kakuro(10, 10, seed, false))
        .chain((50..70u64).map(|seed| gen_kakuro(10, 10, seed, true)));
    let runs = grids
        .map(|g| {
            let p = encode_kakuro(&g.unwrap());
            let run = |mode| {
                let (out, stats) = solve(&p, &SolverConfig::new(mode)).unwrap();
                assert!(matches!(out, SolveOutcome::Sat(_)), "generated kakuro is not sat");
                stats
            };
            KakuroRun {
                standard: run(FilterMode::Standard),
                improved: run(FilterMode::Improved),
            }
        })
        .collect();
    (runs, start.elapsed())
}

fn dominance(runs: &[KakuroRun], elapsed: Duration) -> Outcome {
    let dominated = runs.iter().filter(|r| r.improved.decisions <= r.standard.decisions).count();
    let strict = runs.iter().filter(|r| r.improved.decisions < r.standard.decisions).count();
    let fewer_conflicts = runs.iter().filter(|r| r.improved.conflicts <= r.standard.conflicts).count();
    let mut ratios: Vec<f64> = runs
        .iter()
        .map(|r| {
            if r.standard.decisions == 0 {
                1.0
            } else {
                r.improved.decisions as f64 / r.standard.decisions as f64
            }
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    let median = if n % 2 == 1 { ratios[n / 2] } else { (ratios[n / 2 - 1] + ratios[n / 2]) / 2.0 };
    check(
        dominated == n && 2 * strict >= n && median <= 0.75 && elapsed < Duration::from_secs(600),
        format!("{n} instances, improved <= standard on {dominated}, strictly fewer on {strict}, median ratio {median:.3}, \
             conflicts no higher on {fewer_conflicts}, {elapsed:.2?}"),
    )
}

fn bound_statistics(runs: &[KakuroRun]) -> Outcome {
    let computed: u64 = runs.iter().map(|r| r.improved.bounds_computed).sum();
    let improved: u64 = runs.iter().map(|r| r.improved.bounds_improved).sum();
    let gain: u64 = runs.iter().map(|r| r.improved.improvement_total).sum();
    let pooled_pct = 100.0 * improved as f64 / computed.max(1) as f64;
    let pooled_avg = gain as f64 / improved.max(1) as f64;
    let per_instance: Vec<(f64, f64)> = runs
        .iter()
        .filter(|r| r.improved.bounds_improved > 0)
        .map(|r| {
            let s = r.improved;
            (
                100.0 * s.bounds_improved as f64 / s.bounds_computed as f64,
                s.improvement_total as f64 / s.bounds_improved as f64,
            )
        })
        .collect();
    let k = per_instance.len().max(1) as f64;
    let mean_pct = per_instance.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_avg = per_instance.iter().map(|p| p.1).sum::<f64>() / k;
    check(
        pooled_pct > 20.0 && mean_pct > 20.0 && pooled_avg >= 1.5 && mean_avg >= 1.5,
        format!(
            "improved bounds {pooled_pct:.1}% pooled / {mean_pct:.1}% mean per instance, \
             average improvement {pooled_avg:.2} pooled / {mean_avg:.2} mean per instance"
        ),
    )
}

fn synthetic(n: usize, seed: u64) -> (DomainStore, LinearExpression) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = DomainStore::new();
    let span = n as i64;
    let terms: Vec<(i64, VariableId)> = (0..n)
        .map(|_| {
            let lo = rng.gen_range(0..span);
            (rng.gen_range(1..=1000), s.add_variable(FiniteDomain::interval(lo, lo + span)))
        })
        .collect();
    (s, LinearExpression::new(terms))
}

fn fastest(n: usize, reps: usize) -> Duration {
    let (s, e) = synthetic(n, n as u64);
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(calculate_improved_minimum(std::hint::black_box(&e), &s));
            t.elapsed()
        })
        .min()
        .unwrap()
}

fn scaling() -> Outcome {
    let small = fastest(1_000, 300);
    let large = fastest(100_000, 5);
    let nlogn = |n: f64| n * n.ln();
    let predicted = small.as_secs_f64() * nlogn(1e5) / nlogn(1e3);
    let ratio = large.as_secs_f64() / predicted;
    check(
        large < Duration::from_secs(1) && ratio <= 3.0,
        format!("1e3 terms {small:.2?}, 1e5 terms {large:.2?}, {ratio:.2}x the n log n extrapolation"),
    )
}

fn end_to_end() -> Outcome {
    let limit = Duration::from_secs(60);
    let config = SolverConfig::new(FilterMode::Improved)
        .with_var_order(VarOrder::MinDomain)
        .with_time_limit(limit);
    let mut detail = Vec::new();
    let mut ok = true;
    let instances = [
        ("magic 9x9 with 50 givens, seed 1", encode_magic(9, &gen_magic(9, 50, 1).unwrap()).unwrap()),
        ("crypto, seed 1", encode_crypto(&gen_crypto(1)).unwrap()),
    ];
    for (name, p) in instances {
        let start = Instant::now();
        let (out, stats) = solve(&p, &config).unwrap();
        let t = start.elapsed();
        let sat = matches!(&out, SolveOutcome::Sat(a) if p.is_solution(a));
        ok &= sat && t < limit;
        detail.push(format!("{name}: {} in {t:.2?} ({} decisions)", out.name(), stats.decisions));
    }
    check(ok, detail.join("; "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: u32, name: &str, outcome: Outcome| {
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} {id:>2} {name}: {detail}");
    };

    report(1, "standard filter on the six-term example", standard_six_terms());
    report(2, "improved filter on the six-term example", improved_six_terms());
    report(3, "root propagation of x+y+z=6 with alldifferent", three_cell_sum());
    report(4, "two partial alldifferents under one sum", two_partial_alldifferents());
    report(5, "improved minimum against exhaustive search", improved_minimum_oracle());
    report(6, "corrections against recomputed elided minimums", corrections_oracle());
    report(7, "solution sets with filtering against enumeration", filtering_soundness());
    report(8, "alldifferent pruning against exhaustive support", regin_oracle());
    let (runs, elapsed) = kakuro_corpus();
    report(9, "decision dominance on kakuro", dominance(&runs, elapsed));
    report(10, "bound improvement statistics on kakuro", bound_statistics(&runs));
    report(11, "improved minimum scaling", scaling());
    report(12, "generated magic square and crypto instances", end_to_end());

    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
