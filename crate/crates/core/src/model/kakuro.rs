//! Kakuro grids, their encoding, and a generator.
//!
//! Native text format: one grid row per line, cells separated by
//! whitespace.
//!
//! ```text
//! #    16\  17\  #
//! \17  _    _    10\
//! \26  _    _    _2
//! ```
//!
//! `#` is a blocked cell, `_` an empty cell (`_w` with weight `w`), and
//! `d\r` a clue cell with the sum of the line below it (`d`) and of the
//! line to its right (`r`); either side may be left out.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GenerateError, ModelError, ParseError};
use crate::linear::SourceRelation;
use crate::model::{DomainSpec, ProblemInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Blocked,
    Empty { weight: i64 },
    Clue { down: Option<i64>, right: Option<i64> },
}

/// A maximal run of empty cells with the clue that governs it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub cells: Vec<(usize, usize)>,
    pub sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KakuroGrid {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl KakuroGrid {
    pub fn new(rows: usize, cols: usize, cells: Vec<Cell>) -> Result<Self, ModelError> {
        if cells.len() != rows * cols {
            return Err(ModelError::Invalid(format!(
                "{} cells for a {rows}x{cols} grid",
                cells.len()
            )));
        }
        let g = KakuroGrid { rows, cols, cells };
        g.validate()?;
        Ok(g)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.cols + c]
    }

    fn is_empty_cell(&self, r: usize, c: usize) -> bool {
        matches!(self.cell(r, c), Cell::Empty { .. })
    }

    pub fn is_weighted(&self) -> bool {
        self.cells
            .iter()
            .any(|c| matches!(c, Cell::Empty { weight } if *weight != 1))
    }

    pub fn empty_cells(&self) -> Vec<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .filter(|&(r, c)| self.is_empty_cell(r, c))
            .collect()
    }

    pub fn weight(&self, r: usize, c: usize) -> i64 {
        match self.cell(r, c) {
            Cell::Empty { weight } => weight,
            _ => 0,
        }
    }

    fn run(&self, r: usize, c: usize, dr: usize, dc: usize) -> Vec<(usize, usize)> {
        let (mut r, mut c) = (r + dr, c + dc);
        let mut out = Vec::new();
        while r < self.rows && c < self.cols && self.is_empty_cell(r, c) {
            out.push((r, c));
            r += dr;
            c += dc;
        }
        out
    }

    /// Lines in clue order: row-major over clue cells, right before down.
    pub fn lines(&self) -> Vec<Line> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Cell::Clue { down, right } = self.cell(r, c) {
                    if let Some(sum) = right {
                        out.push(Line {
                            cells: self.run(r, c, 0, 1),
                            sum,
                        });
                    }
                    if let Some(sum) = down {
                        out.push(Line {
                            cells: self.run(r, c, 1, 0),
                            sum,
                        });
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), ModelError> {
        let grid_err = |row, col, message: &str| ModelError::Grid {
            row,
            col,
            message: message.to_string(),
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                match self.cell(r, c) {
                    Cell::Empty { weight } => {
                        if !(1..=9).contains(&weight) {
                            return Err(grid_err(r, c, "weight outside 1..9"));
                        }
                        let left = (0..c).rev().find(|&k| !self.is_empty_cell(r, k));
                        match left.map(|k| self.cell(r, k)) {
                            Some(Cell::Clue { right: Some(_), .. }) => {}
                            _ => return Err(grid_err(r, c, "no right-sum clue for this cell")),
                        }
                        let up = (0..r).rev().find(|&k| !self.is_empty_cell(k, c));
                        match up.map(|k| self.cell(k, c)) {
                            Some(Cell::Clue { down: Some(_), .. }) => {}
                            _ => return Err(grid_err(r, c, "no down-sum clue for this cell")),
                        }
                    }
                    Cell::Clue { down, right } => {
                        for (sum, dr, dc, what) in [(right, 0, 1, "right"), (down, 1, 0, "down")] {
                            let Some(sum) = sum else { continue };
                            let line = self.run(r, c, dr, dc);
                            if line.is_empty() || line.len() > 9 {
                                return Err(grid_err(r, c, &format!("{what} line length must be 1..9")));
                            }
                            let mut weights: Vec<i64> = line.iter().map(|&(a, b)| self.weight(a, b)).collect();
                            weights.sort_unstable_by(|a, b| b.cmp(a));
                            let lo: i64 = weights.iter().zip(1..).map(|(w, d)| w * d).sum();
                            let hi: i64 = weights.iter().zip((1..=9).rev()).map(|(w, d)| w * d).sum();
                            if sum < lo || sum > hi {
                                return Err(grid_err(r, c, &format!("{what} sum {sum} is not achievable")));
                            }
                        }
                    }
                    Cell::Blocked => {}
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut rows: Vec<Vec<Cell>> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let row = raw
                .split_whitespace()
                .map(|tok| parse_cell(tok).ok_or_else(|| ParseError::new(line, format!("bad cell `{tok}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(ParseError::new(
                        line,
                        format!("row has {} cells, expected {}", row.len(), first.len()),
                    ));
                }
            }
            rows.push(row);
        }
        let cols = rows.first().map_or(0, Vec::len);
        let n = rows.len();
        KakuroGrid::new(n, cols, rows.into_iter().flatten().collect()).map_err(|e| ParseError::new(0, e.to_string()))
    }
}

fn parse_cell(tok: &str) -> Option<Cell> {
    let num = |s: &str| -> Option<Option<i64>> {
        if s.is_empty() {
            Some(None)
        } else {
            s.parse().ok().map(Some)
        }
    };
    if tok == "#" {
        Some(Cell::Blocked)
    } else if let Some(w) = tok.strip_prefix('_') {
        let weight = if w.is_empty() { 1 } else { w.parse().ok()? };
        Some(Cell::Empty { weight })
    } else {
        let (d, r) = tok.split_once('\\')?;
        Some(Cell::Clue {
            down: num(d)?,
            right: num(r)?,
        })
    }
}

impl fmt::Display for KakuroGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<i64>| v.map_or(String::new(), |x| x.to_string());
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| match self.cell(r, c) {
                    Cell::Blocked => "#".to_string(),
                    Cell::Empty { weight: 1 } => "_".to_string(),
                    Cell::Empty { weight } => format!("_{weight}"),
                    Cell::Clue { down, right } => format!("{}\\{}", opt(down), opt(right)),
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// One variable `c<row>_<col>` in 1..9 per empty cell; per line an
/// alldifferent (skipped for single cells) and a weighted sum equality.
pub fn encode_kakuro(grid: &KakuroGrid) -> ProblemInstance {
    let mut p = ProblemInstance::new();
    let mut var_at = vec![None; grid.rows * grid.cols];
    for (r, c) in grid.empty_cells() {
        var_at[r * grid.cols + c] = Some(p.add_var(format!("c{r}_{c}"), DomainSpec::Interval(1, 9)));
    }
    for line in grid.lines() {
        let vars: Vec<_> = line
            .cells
            .iter()
            .map(|&(r, c)| var_at[r * grid.cols + c].expect("line over a non-empty cell"))
            .collect();
        let coefs = line.cells.iter().map(|&(r, c)| grid.weight(r, c)).collect();
        if vars.len() > 1 {
            p.add_alldifferent(vars.clone());
        }
        p.add_linear(coefs, vars, SourceRelation::Eq, line.sum);
    }
    p.meta.family = Some(if grid.is_weighted() { "gen-kakuro" } else { "kakuro" }.into());
    p.meta.size = Some(format!("{}x{}", grid.rows, grid.cols));
    p
}

const MAX_ATTEMPTS: usize = 200;
const FILL_NODE_BUDGET: usize = 200_000;
const EMPTY_PROBABILITY: f64 = 0.72;

/// Lengths of horizontal and vertical runs containing each cell.
fn run_lengths(open: &[bool], rows: usize, cols: usize) -> (Vec<usize>, Vec<usize>) {
    let mut h = vec![0; rows * cols];
    let mut v = vec![0; rows * cols];
    for r in 0..rows {
        let mut c = 0;
        while c < cols {
            if !open[r * cols + c] {
                c += 1;
                continue;
            }
            let start = c;
            while c < cols && open[r * cols + c] {
                c += 1;
            }
            for k in start..c {
                h[r * cols + k] = c - start;
            }
        }
    }
    for c in 0..cols {
        let mut r = 0;
        while r < rows {
            if !open[r * cols + c] {
                r += 1;
                continue;
            }
            let start = r;
            while r < rows && open[r * cols + c] {
                r += 1;
            }
            for k in start..r {
                v[k * cols + c] = r - start;
            }
        }
    }
    (h, v)
}

/// Random mask of open cells; the first row and column stay closed.
/// Runs of length 1 are closed and runs longer than 9 are split until
/// every run has length 2..9, then only the largest connected region is
/// kept.
fn random_mask(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut open: Vec<bool> = (0..rows * cols)
        .map(|i| i / cols > 0 && i % cols > 0 && rng.gen_bool(EMPTY_PROBABILITY))
        .collect();
    loop {
        let (h, v) = run_lengths(&open, rows, cols);
        let mut changed = false;
        for i in 0..rows * cols {
            if open[i] && (h[i] == 1 || v[i] == 1) {
                open[i] = false;
                changed = true;
            }
        }
        if changed {
            continue;
        }
        let long: Vec<usize> = (0..rows * cols).filter(|&i| open[i] && (h[i] > 9 || v[i] > 9)).collect();
        if let Some(&i) = long.choose(rng) {
            open[i] = false;
            continue;
        }
        break;
    }

    let mut comp = vec![usize::MAX; rows * cols];
    let mut best: (usize, usize) = (0, usize::MAX);
    for s in 0..rows * cols {
        if !open[s] || comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(i) = stack.pop() {
            size += 1;
            let (r, c) = (i / cols, i % cols);
            let mut nbrs = Vec::with_capacity(4);
            if r > 0 {
                nbrs.push(i - cols);
            }
            if r + 1 < rows {
                nbrs.push(i + cols);
            }
            if c > 0 {
                nbrs.push(i - 1);
            }
            if c + 1 < cols {
                nbrs.push(i + 1);
            }
            for j in nbrs {
                if open[j] && comp[j] == usize::MAX {
                    comp[j] = s;
                    stack.push(j);
                }
            }
        }
        if size > best.0 {
            best = (size, s);
        }
    }
    (0..rows * cols).map(|i| open[i] && comp[i] == best.1).collect()
}

/// Fills open cells with digits, distinct along every run.
fn random_fill(open: &[bool], rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Option<Vec<i64>> {
    let cells: Vec<usize> = (0..rows * cols).filter(|&i| open[i]).collect();
    let mut value = vec![0i64; rows * cols];
    let mut choices: Vec<Vec<i64>> = Vec::with_capacity(cells.len());
    let mut nodes = 0;

    let conflicts = |value: &[i64], i: usize, d: i64| -> bool {
        let (r, c) = (i / cols, i % cols);
        let mut k = c;
        while k > 0 && open[r * cols + k - 1] {
            k -= 1;
            if value[r * cols + k] == d {
                return true;
            }
        }
        let mut k = r;
        while k > 0 && open[(k - 1) * cols + c] {
            k -= 1;
            if value[k * cols + c] == d {
                return true;
            }
        }
        false
    };

    let mut depth = 0;
    while depth < cells.len() {
        if choices.len() == depth {
            let mut digits: Vec<i64> = (1..=9).collect();
            digits.shuffle(rng);
            choices.push(digits);
        }
        let i = cells[depth];
        value[i] = 0;
        let mut placed = false;
        while let Some(d) = choices[depth].pop() {
            nodes += 1;
            if !conflicts(&value, i, d) {
                value[i] = d;
                placed = true;
                break;
            }
        }
        if nodes > FILL_NODE_BUDGET {
            return None;
        }
        if placed {
            depth += 1;
        } else {
            choices.pop();
            if depth == 0 {
                return None;
            }
            depth -= 1;
        }
    }
    Some(value)
}

/// A satisfiable grid: random topology, a random valid filling, then the
/// clue sums of that filling. Weighted grids get cell weights in 1..9.
pub fn gen_kakuro(rows: usize, cols: usize, seed: u64, weighted: bool) -> Result<KakuroGrid, GenerateError> {
    if rows < 3 || cols < 3 {
        return Err(GenerateError::Parameter(format!("kakuro grid {rows}x{cols} is too small")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let open = random_mask(rows, cols, &mut rng);
        let n_open = open.iter().filter(|&&o| o).count();
        if n_open * 3 < (rows - 1) * (cols - 1) {
            continue;
        }
        let Some(value) = random_fill(&open, rows, cols, &mut rng) else {
            continue;
        };
        let weight: Vec<i64> = (0..rows * cols)
            .map(|_| if weighted { rng.gen_range(1..=9) } else { 1 })
            .collect();

        let mut cells = vec![Cell::Blocked; rows * cols];
        for i in 0..rows * cols {
            if open[i] {
                cells[i] = Cell::Empty { weight: weight[i] };
            }
        }
        for r in 0..rows {
            for c in 0..cols {
                let i = r * cols + c;
                if open[i] {
                    continue;
                }
                let line_sum = |dr: usize, dc: usize| {
                    let (mut rr, mut cc) = (r + dr, c + dc);
                    let mut sum = None;
                    while rr < rows && cc < cols && open[rr * cols + cc] {
                        let j = rr * cols + cc;
                        *sum.get_or_insert(0) += weight[j] * value[j];
                        rr += dr;
                        cc += dc;
                    }
                    sum
                };
                let (down, right) = (line_sum(1, 0), line_sum(0, 1));
                if down.is_some() || right.is_some() {
                    cells[i] = Cell::Clue { down, right };
                }
            }
        }
        return Ok(KakuroGrid::new(rows, cols, cells)?);
    }
    Err(GenerateError::RetriesExhausted {
        what: "kakuro grid",
        attempts: MAX_ATTEMPTS,
    })
}
