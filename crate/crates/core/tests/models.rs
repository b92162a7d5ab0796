use std::time::Duration;

use adlin::model::crypto::classic_words;
use adlin::model::magic::{is_magic, magic_constant};
use adlin::model::*;
use adlin::search::{solve, SolveOutcome, Solver, SolverConfig, VarOrder};
use adlin::FilterMode;

fn sat(p: &ProblemInstance, config: &SolverConfig) -> Vec<i64> {
    match solve(p, config).unwrap().0 {
        SolveOutcome::Sat(a) => {
            assert!(p.is_solution(&a));
            a
        }
        other => panic!("expected sat, got {}", other.name()),
    }
}

#[test]
fn three_by_three_magic_squares() {
    let p = encode_magic(3, &[]).unwrap();
    for mode in [FilterMode::Standard, FilterMode::Improved] {
        let all = Solver::new(&p, &SolverConfig::new(mode)).unwrap().solve_all().unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|sq| is_magic(3, sq)));
        assert!(all.iter().all(|sq| sq[4] == 5));
    }
    assert_eq!(magic_constant(3), 15);
    let lo_shu = [4, 9, 2, 3, 5, 7, 8, 1, 6];
    let givens = [Given { row: 0, col: 0, value: 4 }, Given { row: 0, col: 1, value: 9 }];
    assert_eq!(sat(&encode_magic(3, &givens).unwrap(), &SolverConfig::default()), lo_shu);
}

#[test]
fn generated_kakuro_solve_in_both_modes() {
    for seed in 0..6 {
        for weighted in [false, true] {
            let grid = gen_kakuro(6, 6, seed, weighted).unwrap();
            let p = encode_kakuro(&grid);
            let a = sat(&p, &SolverConfig::new(FilterMode::Improved));
            let b = sat(&p, &SolverConfig::new(FilterMode::Standard));
            assert_eq!(a, b);
        }
    }
}

#[test]
fn kakuro_grid_text_round_trip_preserves_the_model() {
    let grid = gen_kakuro(8, 8, 3, true).unwrap();
    let again = KakuroGrid::parse(&grid.to_string()).unwrap();
    assert_eq!(grid, again);
    assert_eq!(write_instance(&encode_kakuro(&grid)), write_instance(&encode_kakuro(&again)));
}

#[test]
fn generators_are_deterministic() {
    let text = |seed| write_instance(&encode_kakuro(&gen_kakuro(10, 10, seed, false).unwrap()));
    assert_eq!(text(11), text(11));
    assert_ne!(text(11), text(12));
    assert_eq!(gen_crypto(5), gen_crypto(5));
    assert_eq!(gen_magic(9, 10, 2).unwrap(), gen_magic(9, 10, 2).unwrap());
    assert_eq!(gen_wqg(6, 0.42, 9).unwrap(), gen_wqg(6, 0.42, 9).unwrap());
}

#[test]
fn instance_text_round_trip_of_every_family() {
    let instances = [
        encode_kakuro(&gen_kakuro(7, 7, 1, true).unwrap()),
        encode_crypto(&gen_crypto(1)).unwrap(),
        encode_magic(5, &gen_magic(5, 10, 1).unwrap()).unwrap(),
        encode_wqg(&gen_wqg(5, 0.4, 1).unwrap()).unwrap(),
    ];
    for p in instances {
        let text = write_instance(&p);
        let q = parse_instance(&text).unwrap();
        assert_eq!(p, q);
        assert_eq!(text, write_instance(&q));
    }
}

#[test]
fn classic_cryptarithm_solves() {
    let p = encode_crypto(&classic_words()).unwrap();
    let a = sat(&p, &SolverConfig::default());
    let mut seen = a.clone();
    seen.sort_unstable();
    seen.dedup();
    assert_eq!(seen.len(), 26);
}

#[test]
fn generated_crypto_solves() {
    let p = encode_crypto(&gen_crypto(1)).unwrap();
    sat(
        &p,
        &SolverConfig::new(FilterMode::Improved)
            .with_var_order(VarOrder::MinDomain)
            .with_time_limit(Duration::from_secs(60)),
    );
}

#[test]
fn generated_magic_completions_solve() {
    for seed in 0..3 {
        let givens = gen_magic(5, 10, seed).unwrap();
        let a = sat(&encode_magic(5, &givens).unwrap(), &SolverConfig::default().with_var_order(VarOrder::MinDomain));
        assert!(is_magic(5, &a));
        assert!(givens.iter().all(|g| a[g.row * 5 + g.col] == g.value));
    }
}

#[test]
fn generated_quasigroups_have_a_light_row() {
    for seed in 0..4 {
        let w = gen_wqg(5, 0.4, seed).unwrap();
        let p = encode_wqg(&w).unwrap();
        let a = sat(&p, &SolverConfig::default().with_var_order(VarOrder::MinDomain));
        let n = w.n;
        let light = (0..n).any(|r| (0..n).map(|c| w.weights[r * n + c] * a[r * n + c]).sum::<i64>() <= w.k);
        assert!(light);
        for r in 0..n {
            let mut row: Vec<i64> = a[r * n..(r + 1) * n].to_vec();
            row.sort_unstable();
            assert_eq!(row, (1..=n as i64).collect::<Vec<_>>());
        }
    }
}
