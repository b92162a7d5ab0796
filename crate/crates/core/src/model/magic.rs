//! Magic-square completion.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GenerateError, ModelError};
use crate::linear::SourceRelation;
use crate::model::{DomainSpec, ProblemInstance};

/// A preset cell value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Given {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

pub fn magic_constant(n: usize) -> i64 {
    let n = n as i64;
    n * (n * n + 1) / 2
}

/// `x<r>_<c>` in 1..n², one alldifferent, and equalities for every row,
/// column and both diagonals. Givens fix their cell's domain.
pub fn encode_magic(n: usize, givens: &[Given]) -> Result<ProblemInstance, ModelError> {
    if n < 3 {
        return Err(ModelError::Invalid(format!("magic square order {n} is below 3")));
    }
    let top = (n * n) as i64;
    let mut fixed: Vec<Option<i64>> = vec![None; n * n];
    for g in givens {
        let err = |message: &str| ModelError::Grid {
            row: g.row,
            col: g.col,
            message: message.to_string(),
        };
        if g.row >= n || g.col >= n {
            return Err(err("cell outside the square"));
        }
        if !(1..=top).contains(&g.value) {
            return Err(err(&format!("value {} outside 1..{top}", g.value)));
        }
        let cell = &mut fixed[g.row * n + g.col];
        if cell.is_some_and(|v| v != g.value) {
            return Err(err("cell given twice with different values"));
        }
        *cell = Some(g.value);
    }
    let mut seen = vec![false; n * n + 1];
    for v in fixed.iter().flatten() {
        if std::mem::replace(&mut seen[*v as usize], true) {
            return Err(ModelError::Invalid(format!("value {v} given in two cells")));
        }
    }

    let mut p = ProblemInstance::new();
    let x: Vec<_> = (0..n * n)
        .map(|i| {
            let domain = match fixed[i] {
                Some(v) => DomainSpec::Interval(v, v),
                None => DomainSpec::Interval(1, top),
            };
            p.add_var(format!("x{}_{}", i / n, i % n), domain)
        })
        .collect();
    p.add_alldifferent(x.clone());
    let rhs = magic_constant(n);
    let mut line = |cells: Vec<usize>| {
        let vars = cells.iter().map(|&i| x[i]).collect();
        p.add_linear(vec![1; n], vars, SourceRelation::Eq, rhs);
    };
    for r in 0..n {
        line((0..n).map(|c| r * n + c).collect());
    }
    for c in 0..n {
        line((0..n).map(|r| r * n + c).collect());
    }
    line((0..n).map(|i| i * n + i).collect());
    line((0..n).map(|i| i * n + (n - 1 - i)).collect());
    p.meta.family = Some("magic".into());
    p.meta.size = Some(n.to_string());
    Ok(p)
}

fn siamese(n: usize) -> Vec<i64> {
    let mut sq = vec![0; n * n];
    let (mut r, mut c) = (0, n / 2);
    for v in 1..=(n * n) as i64 {
        sq[r * n + c] = v;
        let (nr, nc) = ((r + n - 1) % n, (c + 1) % n);
        if sq[nr * n + nc] != 0 {
            r = (r + 1) % n;
        } else {
            (r, c) = (nr, nc);
        }
    }
    sq
}

fn doubly_even(n: usize) -> Vec<i64> {
    let top = (n * n) as i64;
    (0..n * n)
        .map(|i| {
            let (r, c) = (i / n, i % n);
            let diagonal = (r % 4 == c % 4) || ((r % 4) + (c % 4) == 3);
            if diagonal {
                top - i as i64
            } else {
                i as i64 + 1
            }
        })
        .collect()
}

/// Strachey's construction for `n = 4k + 2`.
fn singly_even(n: usize) -> Vec<i64> {
    let m = n / 2;
    let k = (n - 2) / 4;
    let base = siamese(m);
    let quarter = (m * m) as i64;
    let mut sq = vec![0; n * n];
    for r in 0..m {
        for c in 0..m {
            let v = base[r * m + c];
            sq[r * n + c] = v;
            sq[(r + m) * n + c + m] = v + quarter;
            sq[r * n + c + m] = v + 2 * quarter;
            sq[(r + m) * n + c] = v + 3 * quarter;
        }
    }
    for r in 0..m {
        let left: Vec<usize> = if r == m / 2 { (1..=k).collect() } else { (0..k).collect() };
        for c in left {
            sq.swap(r * n + c, (r + m) * n + c);
        }
        for c in (n - k + 1)..n {
            sq.swap(r * n + c, (r + m) * n + c);
        }
    }
    sq
}

/// Some magic square of order `n >= 3`.
pub fn construct_magic(n: usize) -> Vec<i64> {
    match n % 4 {
        0 => doubly_even(n),
        2 => singly_even(n),
        _ => siamese(n),
    }
}

/// Row-major magic square of a random member of a family of squares
/// related to the construction by value- and line-preserving moves.
pub fn random_magic(n: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    let mut sq = construct_magic(n);
    let top = (n * n) as i64;
    if rng.gen_bool(0.5) {
        sq.iter_mut().for_each(|v| *v = top + 1 - *v);
    }
    // Swapping rows i, n-1-i together with columns i, n-1-i keeps both
    // diagonals intact.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..n / 2 {
        if rng.gen_bool(0.5) {
            perm.swap(i, n - 1 - i);
        }
    }
    // So does applying the same permutation of the outer half to rows and
    // columns, mirrored onto the other half.
    let mut half: Vec<usize> = (0..n / 2).collect();
    half.shuffle(rng);
    let mut outer: Vec<usize> = (0..n).collect();
    for (i, &h) in half.iter().enumerate() {
        outer[i] = h;
        outer[n - 1 - i] = n - 1 - h;
    }
    let order: Vec<usize> = (0..n).map(|i| perm[outer[i]]).collect();
    let mut out = vec![0; n * n];
    for r in 0..n {
        for c in 0..n {
            out[r * n + c] = sq[order[r] * n + order[c]];
        }
    }
    if rng.gen_bool(0.5) {
        let t = out.clone();
        for r in 0..n {
            for c in 0..n {
                out[r * n + c] = t[c * n + r];
            }
        }
    }
    if rng.gen_bool(0.5) {
        for r in 0..n {
            out[r * n..(r + 1) * n].reverse();
        }
    }
    out
}

pub fn is_magic(n: usize, sq: &[i64]) -> bool {
    let target = magic_constant(n);
    let mut values = sq.to_vec();
    values.sort_unstable();
    let distinct = values.iter().copied().eq(1..=(n * n) as i64);
    let rows = (0..n).all(|r| (0..n).map(|c| sq[r * n + c]).sum::<i64>() == target);
    let cols = (0..n).all(|c| (0..n).map(|r| sq[r * n + c]).sum::<i64>() == target);
    let d1: i64 = (0..n).map(|i| sq[i * n + i]).sum();
    let d2: i64 = (0..n).map(|i| sq[i * n + n - 1 - i]).sum();
    distinct && rows && cols && d1 == target && d2 == target
}

/// `count` givens taken from a random magic square.
pub fn gen_magic(n: usize, count: usize, seed: u64) -> Result<Vec<Given>, GenerateError> {
    if n < 3 {
        return Err(GenerateError::Parameter(format!("magic square order {n} is below 3")));
    }
    if count > n * n {
        return Err(GenerateError::Parameter(format!("{count} givens do not fit a {n}x{n} square")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sq = random_magic(n, &mut rng);
    let mut cells: Vec<usize> = (0..n * n).collect();
    cells.shuffle(&mut rng);
    let mut chosen = cells[..count].to_vec();
    chosen.sort_unstable();
    Ok(chosen
        .into_iter()
        .map(|i| Given {
            row: i / n,
            col: i % n,
            value: sq[i],
        })
        .collect())
}
