//! Weighted quasigroup completion, decision version: complete the latin
//! square so that some row's weighted sum is at most `k`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GenerateError, ModelError};
use crate::linear::SourceRelation;
use crate::model::magic::Given;
use crate::model::{DomainSpec, ProblemInstance};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WqgInstance {
    pub n: usize,
    /// Row-major cell weights.
    pub weights: Vec<i64>,
    pub givens: Vec<Given>,
    pub k: i64,
}

/// Cells `x<r>_<c>` in 1..n with row and column alldifferents, row sums
/// `y<r> = sum_j p_rj * x_rj`, and the clause `y_0 <= k \/ ... \/ y_{n-1} <= k`.
pub fn encode_wqg(w: &WqgInstance) -> Result<ProblemInstance, ModelError> {
    let n = w.n;
    if n < 2 {
        return Err(ModelError::Invalid(format!("quasigroup order {n} is below 2")));
    }
    if w.weights.len() != n * n {
        return Err(ModelError::Invalid(format!("{} weights for order {n}", w.weights.len())));
    }
    if let Some(i) = w.weights.iter().position(|&p| p <= 0) {
        return Err(ModelError::Grid {
            row: i / n,
            col: i % n,
            message: "weight must be positive".into(),
        });
    }
    let mut fixed = vec![None; n * n];
    for g in &w.givens {
        if g.row >= n || g.col >= n || !(1..=n as i64).contains(&g.value) {
            return Err(ModelError::Grid {
                row: g.row,
                col: g.col,
                message: format!("given {} out of range", g.value),
            });
        }
        fixed[g.row * n + g.col] = Some(g.value);
    }

    let mut p = ProblemInstance::new();
    let x: Vec<_> = (0..n * n)
        .map(|i| {
            let domain = match fixed[i] {
                Some(v) => DomainSpec::Interval(v, v),
                None => DomainSpec::Interval(1, n as i64),
            };
            p.add_var(format!("x{}_{}", i / n, i % n), domain)
        })
        .collect();
    let y: Vec<_> = (0..n)
        .map(|r| {
            let total: i64 = w.weights[r * n..(r + 1) * n].iter().sum();
            p.add_var(format!("y{r}"), DomainSpec::Interval(total, total * n as i64))
        })
        .collect();
    for r in 0..n {
        p.add_alldifferent((0..n).map(|c| x[r * n + c]).collect());
    }
    for c in 0..n {
        p.add_alldifferent((0..n).map(|r| x[r * n + c]).collect());
    }
    for r in 0..n {
        let mut coefs: Vec<i64> = w.weights[r * n..(r + 1) * n].to_vec();
        let mut vars: Vec<_> = (0..n).map(|c| x[r * n + c]).collect();
        coefs.push(-1);
        vars.push(y[r]);
        p.add_linear(coefs, vars, SourceRelation::Eq, 0);
    }
    p.add_bound_or(y.iter().map(|&yr| (yr, w.k)).collect());
    p.meta.family = Some("wqg".into());
    p.meta.size = Some(n.to_string());
    Ok(p)
}

/// A shuffled cyclic latin square, row-major, values 1..n.
pub fn random_latin_square(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut symbols: Vec<i64> = (1..=n as i64).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    symbols.shuffle(rng);
    (0..n * n)
        .map(|i| symbols[(rows[i / n] + cols[i % n]) % n])
        .collect()
}

/// Weights in 1..100, `k` the smallest weighted row sum of a hidden latin
/// square, and `round(fill_ratio * n^2)` of its cells given.
pub fn gen_wqg(n: usize, fill_ratio: f64, seed: u64) -> Result<WqgInstance, GenerateError> {
    if n < 2 {
        return Err(GenerateError::Parameter(format!("quasigroup order {n} is below 2")));
    }
    if !(0.0..=1.0).contains(&fill_ratio) {
        return Err(GenerateError::Parameter(format!("fill ratio {fill_ratio} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let square = random_latin_square(n, &mut rng);
    let weights: Vec<i64> = (0..n * n).map(|_| rng.gen_range(1..=100)).collect();
    let k = (0..n)
        .map(|r| (0..n).map(|c| weights[r * n + c] * square[r * n + c]).sum::<i64>())
        .min()
        .expect("order is at least 2");
    let mut cells: Vec<usize> = (0..n * n).collect();
    cells.shuffle(&mut rng);
    let count = (fill_ratio * (n * n) as f64).round() as usize;
    let mut chosen = cells[..count].to_vec();
    chosen.sort_unstable();
    let givens = chosen
        .into_iter()
        .map(|i| Given {
            row: i / n,
            col: i % n,
            value: square[i],
        })
        .collect();
    Ok(WqgInstance { n, weights, givens, k })
}
