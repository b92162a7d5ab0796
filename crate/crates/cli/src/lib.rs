//! Command implementations behind the `adlin` binary.
//!
//! Every command writes its report to the given writer and returns the
//! process exit code; diagnostics go to standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use adlin::model::crypto::{parse_words, write_words};
use adlin::model::{
    encode_crypto, encode_kakuro, encode_magic, encode_wqg, gen_crypto, gen_kakuro, gen_magic, gen_wqg,
    parse_instance, write_instance, KakuroGrid, ProblemInstance,
};
use adlin::oracle::{brute_solutions, OracleBudget};
use adlin::report::{RunReport, CSV_SCHEMA};
use adlin::search::{SearchStats, SolveOutcome, Solver, SolverConfig, VarOrder};
use adlin::FilterMode;
use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_LIMIT: i32 = 30;

#[derive(Debug, Parser)]
#[command(name = "adlin", version, about = "Linear constraints with alldifferent-aware bound filtering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve(SolveArgs),
    /// Run every instance in a directory under both filters.
    Compare(CompareArgs),
    /// Generate benchmark instances.
    Gen(GenArgs),
    /// Cross-check the solver against exhaustive enumeration.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterArg {
    Standard,
    Improved,
}

impl From<FilterArg> for FilterMode {
    fn from(f: FilterArg) -> Self {
        match f {
            FilterArg::Standard => FilterMode::Standard,
            FilterArg::Improved => FilterMode::Improved,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VarOrderArg {
    Lex,
    MinDomain,
}

impl From<VarOrderArg> for VarOrder {
    fn from(v: VarOrderArg) -> Self {
        match v {
            VarOrderArg::Lex => VarOrder::Lexicographic,
            VarOrderArg::MinDomain => VarOrder::MinDomain,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputArg {
    Text,
    Csv,
}

/// Text formats `solve` and `verify` accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Instance,
    Kakuro,
    Crypto,
}

#[derive(Debug, Clone, Args)]
pub struct Limits {
    /// Stop after this many decisions.
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Stop after this many milliseconds.
    #[arg(long)]
    pub time_limit_ms: Option<u64>,
}

impl Limits {
    fn apply(&self, mut config: SolverConfig) -> SolverConfig {
        if let Some(n) = self.node_limit {
            config = config.with_node_limit(n);
        }
        if let Some(ms) = self.time_limit_ms {
            config = config.with_time_limit(Duration::from_millis(ms));
        }
        config
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "improved")]
    pub filter: FilterArg,
    #[arg(long, value_enum, default_value = "lex")]
    pub var_order: VarOrderArg,
    #[command(flatten)]
    pub limits: Limits,
    #[arg(long, value_enum, default_value = "text")]
    pub output: OutputArg,
    #[arg(long, value_enum, default_value = "instance")]
    pub format: InputFormat,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    pub dir: PathBuf,
    #[command(flatten)]
    pub limits: Limits,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub output: OutputArg,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// kakuro, gen-kakuro, crypto, magic or wqg.
    pub family: String,
    /// `RxC` or `N` for kakuro, the order for magic and wqg.
    #[arg(long)]
    pub size: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Predefined cells of a magic square.
    #[arg(long, default_value_t = 10)]
    pub givens: usize,
    /// Share of quasigroup cells given.
    #[arg(long, default_value_t = 0.42)]
    pub fill: f64,
    /// Write the kakuro grid or crypto word list instead of the instance.
    #[arg(long)]
    pub native: bool,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "improved")]
    pub filter: FilterArg,
    #[arg(long, value_enum, default_value = "lex")]
    pub var_order: VarOrderArg,
    #[arg(long, value_enum, default_value = "instance")]
    pub format: InputFormat,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Compare(a) => cmd_compare(&a, out),
        Command::Gen(a) => cmd_gen(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}

pub fn load(path: &Path, format: InputFormat) -> anyhow::Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let problem = match format {
        InputFormat::Instance => parse_instance(&text)?,
        InputFormat::Kakuro => encode_kakuro(&KakuroGrid::parse(&text)?),
        InputFormat::Crypto => encode_crypto(&parse_words(&text)?)?,
    };
    Ok(problem)
}

fn instance_id(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn family_of(p: &ProblemInstance) -> String {
    p.meta.family.clone().unwrap_or_else(|| "unknown".into())
}

/// Solves once, timing the whole search including setup.
pub fn run_one(problem: &ProblemInstance, config: &SolverConfig) -> anyhow::Result<(SolveOutcome, SearchStats, f64)> {
    let start = Instant::now();
    let mut solver = Solver::new(problem, config)?;
    let outcome = solver.solve();
    Ok((outcome, solver.stats(), start.elapsed().as_secs_f64() * 1e3))
}

fn exit_code(outcome: &SolveOutcome) -> i32 {
    match outcome {
        SolveOutcome::Sat(_) => EXIT_OK,
        SolveOutcome::Unsat => EXIT_UNSAT,
        SolveOutcome::Limit => EXIT_LIMIT,
    }
}

fn csv_preamble(out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "#schema={CSV_SCHEMA}")?;
    writeln!(out, "{}", RunReport::csv_header())
}

pub fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let problem = load(&a.path, a.format)?;
    let mode = FilterMode::from(a.filter);
    let config = a.limits.apply(SolverConfig::new(mode).with_var_order(a.var_order.into()));
    let (outcome, stats, ms) = run_one(&problem, &config)?;
    let report = RunReport::new(instance_id(&a.path), family_of(&problem), mode, &outcome, ms, stats);
    match a.output {
        OutputArg::Text => {
            write!(out, "{}", report.to_text())?;
            if let SolveOutcome::Sat(values) = &outcome {
                writeln!(out, "solution:")?;
                write!(out, "{}", problem.format_assignment(values))?;
            }
        }
        OutputArg::Csv => {
            csv_preamble(out)?;
            writeln!(out, "{}", report.csv_row())?;
        }
    }
    Ok(exit_code(&outcome))
}

fn instance_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("cannot read directory {}", dir.display()))? {
        let path = entry?.path();
        if path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn compare_one(path: &Path, limits: &Limits) -> Vec<RunReport> {
    let id = instance_id(path);
    let modes = [FilterMode::Standard, FilterMode::Improved];
    let problem = match load(path, InputFormat::Instance) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{id}: {e:#}");
            return modes.iter().map(|&m| failed_report(&id, "unknown", m)).collect();
        }
    };
    let family = family_of(&problem);
    modes
        .iter()
        .map(|&mode| {
            // Pinned order so that the two filters explore comparable trees.
            let config = limits.apply(SolverConfig::new(mode).with_var_order(VarOrder::Lexicographic));
            match run_one(&problem, &config) {
                Ok((outcome, stats, ms)) => RunReport::new(id.clone(), family.clone(), mode, &outcome, ms, stats),
                Err(e) => {
                    eprintln!("{id}: {e:#}");
                    failed_report(&id, &family, mode)
                }
            }
        })
        .collect()
}

fn failed_report(id: &str, family: &str, mode: FilterMode) -> RunReport {
    RunReport {
        instance: id.to_string(),
        family: family.to_string(),
        filter_mode: mode,
        result: "error".into(),
        wall_time_ms: 0.0,
        stats: SearchStats::default(),
    }
}

/// Runs `files` on up to `jobs` threads, keeping input order in the result.
fn compare_all(files: &[PathBuf], limits: &Limits, jobs: usize) -> Vec<RunReport> {
    let slots: Vec<Mutex<Vec<RunReport>>> = files.iter().map(|_| Mutex::new(Vec::new())).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, files.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                *slots[i].lock().unwrap() = compare_one(path, limits);
            });
        }
    });
    slots.into_iter().flat_map(|s| s.into_inner().unwrap()).collect()
}

/// Sums over the runs of one filter mode, reported as instance `total`.
pub fn aggregate(reports: &[RunReport], mode: FilterMode) -> RunReport {
    let mut stats = SearchStats::default();
    let mut ms = 0.0;
    let mut counts = [0usize; 4];
    for r in reports.iter().filter(|r| r.filter_mode == mode) {
        stats.decisions += r.stats.decisions;
        stats.conflicts += r.stats.conflicts;
        stats.bounds_computed += r.stats.bounds_computed;
        stats.bounds_improved += r.stats.bounds_improved;
        stats.improvement_total += r.stats.improvement_total;
        ms += r.wall_time_ms;
        let k = match r.result.as_str() {
            "sat" => 0,
            "unsat" => 1,
            "limit" => 2,
            _ => 3,
        };
        counts[k] += 1;
    }
    RunReport {
        instance: "total".into(),
        family: "*".into(),
        filter_mode: mode,
        result: format!("sat:{};unsat:{};limit:{};error:{}", counts[0], counts[1], counts[2], counts[3]),
        wall_time_ms: ms,
        stats,
    }
}

fn text_table(rows: &[RunReport], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<28} {:<12} {:<9} {:<34} {:>10} {:>10} {:>8} {:>8} {:>10}",
        "instance", "family", "filter", "result", "decisions", "conflicts", "impr%", "avg", "ms"
    )?;
    for r in rows {
        let avg = r.avg_improvement().map_or("-".to_string(), |a| format!("{a:.2}"));
        writeln!(
            out,
            "{:<28} {:<12} {:<9} {:<34} {:>10} {:>10} {:>8.2} {:>8} {:>10.1}",
            r.instance,
            r.family,
            r.filter_mode.name(),
            r.result,
            r.stats.decisions,
            r.stats.conflicts,
            r.bounds_improved_percent(),
            avg,
            r.wall_time_ms
        )?;
    }
    Ok(())
}

pub fn cmd_compare(a: &CompareArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let files = instance_files(&a.dir)?;
    let mut rows = compare_all(&files, &a.limits, a.jobs);
    if !rows.is_empty() {
        let totals = [aggregate(&rows, FilterMode::Standard), aggregate(&rows, FilterMode::Improved)];
        rows.extend(totals);
    }
    match a.output {
        OutputArg::Csv => {
            csv_preamble(out)?;
            for r in &rows {
                writeln!(out, "{}", r.csv_row())?;
            }
        }
        OutputArg::Text => text_table(&rows, out)?,
    }
    Ok(EXIT_OK)
}

fn parse_grid_size(size: &str) -> anyhow::Result<(usize, usize)> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| anyhow!("bad size `{size}`"));
    match size.split_once(['x', 'X']) {
        Some((r, c)) => Ok((parse(r)?, parse(c)?)),
        None => {
            let n = parse(size)?;
            Ok((n, n))
        }
    }
}

fn parse_order(size: &str) -> anyhow::Result<usize> {
    size.trim().parse().map_err(|_| anyhow!("bad size `{size}`"))
}

/// Seed of the `k`-th instance of a batch.
pub fn instance_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(1_000_000).wrapping_add(k)
}

/// One generated file: its name stem and contents.
fn generate(a: &GenArgs, k: u64) -> anyhow::Result<(String, String)> {
    let seed = instance_seed(a.seed, k);
    let (size, text) = match a.family.as_str() {
        fam @ ("kakuro" | "gen-kakuro") => {
            let (r, c) = parse_grid_size(a.size.as_deref().unwrap_or("10x10"))?;
            let grid = gen_kakuro(r, c, seed, fam == "gen-kakuro")?;
            let size = format!("{r}x{c}");
            let text = if a.native {
                grid.to_string()
            } else {
                let mut p = encode_kakuro(&grid);
                p.meta.family = Some(fam.to_string());
                instance_text(p, seed, &size)
            };
            (size, text)
        }
        "crypto" => {
            let words = gen_crypto(seed);
            let size = words.len().to_string();
            let text = if a.native {
                write_words(&words)
            } else {
                instance_text(encode_crypto(&words)?, seed, &size)
            };
            (size, text)
        }
        "magic" => {
            native_unsupported(a)?;
            let n = parse_order(a.size.as_deref().unwrap_or("9"))?;
            let givens = gen_magic(n, a.givens, seed)?;
            let mut p = encode_magic(n, &givens)?;
            p.meta.family = Some("magic".into());
            (n.to_string(), instance_text(p, seed, &n.to_string()))
        }
        "wqg" => {
            native_unsupported(a)?;
            let n = parse_order(a.size.as_deref().unwrap_or("6"))?;
            let mut p = encode_wqg(&gen_wqg(n, a.fill, seed)?)?;
            p.meta.family = Some("wqg".into());
            (n.to_string(), instance_text(p, seed, &n.to_string()))
        }
        other => bail!("unsupported family `{other}`"),
    };
    Ok((format!("{}-{size}-{}-{k}", a.family, a.seed), text))
}

fn native_unsupported(a: &GenArgs) -> anyhow::Result<()> {
    if a.native {
        bail!("family `{}` has no native format", a.family);
    }
    Ok(())
}

fn instance_text(mut p: ProblemInstance, seed: u64, size: &str) -> String {
    p.meta.seed = Some(seed);
    p.meta.size = Some(size.to_string());
    write_instance(&p)
}

pub fn cmd_gen(a: &GenArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    for k in 0..a.count {
        let (name, text) = generate(a, k)?;
        let path = a.out.join(&name);
        fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(EXIT_OK)
}

/// How a solver run relates to the full solution set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Disagree(String),
}

/// `oracle` must be sorted. `first` is the solver's first answer and `all`
/// every solution it enumerates.
pub fn compare_with_oracle(oracle: &[Vec<i64>], first: &SolveOutcome, all: &[Vec<i64>]) -> Verdict {
    match first {
        SolveOutcome::Limit => return Verdict::Disagree("solver hit a limit".into()),
        SolveOutcome::Unsat if !oracle.is_empty() => {
            return Verdict::Disagree(format!("solver says unsat, oracle found {} solutions", oracle.len()))
        }
        SolveOutcome::Sat(a) if oracle.binary_search(a).is_err() => {
            return Verdict::Disagree(format!("solver solution {a:?} is not an oracle solution"))
        }
        _ => {}
    }
    let mut all = all.to_vec();
    all.sort();
    if all != oracle {
        return Verdict::Disagree(format!("solver enumerates {} solutions, oracle {}", all.len(), oracle.len()));
    }
    Verdict::Agree
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> anyhow::Result<i32> {
    let problem = load(&a.path, a.format)?;
    let mut oracle = brute_solutions(&problem, &OracleBudget::default())?;
    oracle.sort();
    let config = SolverConfig::new(a.filter.into()).with_var_order(a.var_order.into());
    let first = Solver::new(&problem, &config)?.solve();
    let all = Solver::new(&problem, &config)?
        .solve_all()
        .ok_or_else(|| anyhow!("solver hit a limit while enumerating"))?;
    writeln!(out, "instance: {}", instance_id(&a.path))?;
    writeln!(out, "oracle_solutions: {}", oracle.len())?;
    writeln!(out, "solver_result: {}", first.name())?;
    writeln!(out, "solver_solutions: {}", all.len())?;
    match compare_with_oracle(&oracle, &first, &all) {
        Verdict::Agree => {
            writeln!(out, "verdict: agree")?;
            Ok(EXIT_OK)
        }
        Verdict::Disagree(why) => {
            writeln!(out, "verdict: disagree ({why})")?;
            Ok(EXIT_DISAGREE)
        }
    }
}
