//! Command implementations behind the `omv` binary.

pub mod format;

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use omv_core::config::mix_seed;
use omv_core::harness::{gen_instance, Distribution, InstanceSpec};
use omv_core::oracle::product;
use omv_core::{
    build_solver, Chain, Family, HittingSize, MonotonicityCase, OmvError, Param, ProblemKind,
    ReductionConfig,
};

use format::{
    format_answers, format_instance, format_values, parse_answers, parse_instance, parse_values,
    queries_line, read_header, FormatError, Lines,
};

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const MISMATCH: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const VALIDATION: u8 = 3;
    pub const PROTOCOL: u8 = 4;
    pub const CHAIN: u8 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("incompatible chain: {0}")]
    Chain(String),
    #[error("mismatch at query {query}, row {row}: expected {expected}, got {got}")]
    Mismatch {
        query: usize,
        row: usize,
        expected: String,
        got: String,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Protocol(_) => exit::PROTOCOL,
            CliError::Chain(_) => exit::CHAIN,
            CliError::Mismatch { .. } => exit::MISMATCH,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Parse { .. } => CliError::Parse(e.to_string()),
            FormatError::Invalid { .. } => CliError::Validation(e.to_string()),
        }
    }
}

impl From<OmvError> for CliError {
    fn from(e: OmvError) -> Self {
        match e {
            OmvError::Chain(_) => CliError::Chain(e.to_string()),
            OmvError::Config(_) => CliError::Parse(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "omv",
    version,
    about = "Online matrix-vector products and their reductions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Answer every query of an instance through a reduction chain.
    Solve(SolveArgs),
    /// Check an answer file against the naive oracle.
    Verify(VerifyArgs),
    /// Answer queries from standard input one line at a time.
    Protocol(ProtocolArgs),
    /// Tabulate per-query counters and wall time for a chain.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Monotone {
    Rows,
    Cols,
    Query,
    Stream,
}

impl From<Monotone> for MonotonicityCase {
    fn from(m: Monotone) -> Self {
        match m {
            Monotone::Rows => MonotonicityCase::Rows,
            Monotone::Cols => MonotonicityCase::Columns,
            Monotone::Query => MonotonicityCase::WithinQuery,
            Monotone::Stream => MonotonicityCase::AcrossQueries,
        }
    }
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// bool, eq, dom, minwit, minmax or bmmp.
    pub problem: String,
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monotonicity case of a bmmp instance.
    #[arg(long, value_enum, default_value = "rows")]
    pub monotone: Monotone,
    /// Number of queries (default n).
    #[arg(long)]
    pub queries: Option<usize>,
    /// Concentrate entries on a few heavy values.
    #[arg(long)]
    pub skewed: bool,
    /// Number of heavy values with --skewed.
    #[arg(long, default_value_t = 2)]
    pub heavy: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub lo: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub hi: Option<i64>,
    /// Probability of a 1 in Boolean instances.
    #[arg(long)]
    pub density: Option<f64>,
    /// Probability of an infinite entry (dom and minmax only).
    #[arg(long, default_value_t = 0.0)]
    pub inf_rate: f64,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    /// Reduction chain, e.g. `minmax<-dom,dom<-eq,eq<-bool,naive`.
    #[arg(long, default_value = "naive")]
    pub chain: String,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long)]
    pub delta: Option<usize>,
    /// Hitting-set size: `auto`, `full` or a number.
    #[arg(long, default_value = "auto")]
    pub hitting: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent copies of the randomized link, combined by majority vote.
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
}

impl ChainArgs {
    pub fn chain(&self) -> CliResult<Chain> {
        Ok(self.chain.parse::<Chain>()?)
    }

    pub fn config(&self) -> CliResult<ReductionConfig> {
        let hitting = match self.hitting.as_str() {
            "auto" => HittingSize::Auto,
            "full" => HittingSize::Full,
            s => HittingSize::Fixed(
                s.parse()
                    .map_err(|_| CliError::Parse(format!("bad --hitting value `{s}`")))?,
            ),
        };
        Ok(ReductionConfig {
            t: self.t.map_or(Param::Auto, Param::Fixed),
            delta: self.delta.map_or(Param::Auto, Param::Fixed),
            hitting,
            seed: self.seed,
            repeats: self.repeats,
            ..Default::default()
        })
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub answers: PathBuf,
}

#[derive(Args, Debug)]
pub struct ProtocolArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Monotonicity case when the chain solves bmmp.
    #[arg(long, value_enum, default_value = "rows")]
    pub monotone: Monotone,
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Protocol(format!("cannot write output: {e}")))
        }
    }
}

fn kind_for(family: Family, case: MonotonicityCase) -> ProblemKind {
    ProblemKind::from_family(family, (family == Family::Bmmp).then_some(case))
        .expect("case supplied for bmmp")
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let family: Family = args.problem.parse().map_err(CliError::Parse)?;
    let kind = kind_for(family, args.monotone.into());
    let mut spec = InstanceSpec::new(kind, args.n, args.seed).with_inf_rate(args.inf_rate);
    if let Some(q) = args.queries {
        spec = spec.with_queries(q);
    }
    let default = spec.dist;
    let (dlo, dhi) = match default {
        Distribution::Uniform { lo, hi } => (lo, hi),
        _ => (0, 1),
    };
    let (lo, hi) = (args.lo.unwrap_or(dlo), args.hi.unwrap_or(dhi));
    spec.dist = if args.skewed {
        Distribution::Skewed {
            heavy: args.heavy,
            lo,
            hi,
        }
    } else if let Distribution::Boolean { density } = default {
        if args.lo.is_some() || args.hi.is_some() {
            Distribution::Uniform { lo, hi }
        } else {
            Distribution::Boolean {
                density: args.density.unwrap_or(density),
            }
        }
    } else {
        Distribution::Uniform { lo, hi }
    };
    let inst = gen_instance(&spec)?;
    write_output(args.out.as_deref(), &format_instance(&inst))
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let inst = parse_instance(&read_file(&args.instance)?)?;
    let chain = args.chain.chain()?;
    let cfg = args.chain.config()?;
    chain.check_solves(inst.kind.family())?;
    let mut solver = build_solver(inst.kind, &inst.matrix, &chain, &cfg)?;
    let mut answers = Vec::with_capacity(inst.queries.len());
    for q in &inst.queries {
        answers.push(solver.query(q)?);
    }
    write_output(args.out.as_deref(), &format_answers(&answers))?;
    eprint!("{}", solver.report());
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let inst = parse_instance(&read_file(&args.instance)?)?;
    let answers = parse_answers(&read_file(&args.answers)?, inst.n())?;
    if answers.len() != inst.queries.len() {
        return Err(CliError::Validation(format!(
            "expected {} answer lines, found {}",
            inst.queries.len(),
            answers.len()
        )));
    }
    for (j, (q, got)) in inst.queries.iter().zip(&answers).enumerate() {
        let want = product(inst.kind, &inst.matrix, q)?;
        if let Some(i) = (0..inst.n()).find(|&i| want[i] != got[i]) {
            return Err(CliError::Mismatch {
                query: j + 1,
                row: i + 1,
                expected: want[i].to_string(),
                got: got[i].to_string(),
            });
        }
    }
    Ok(())
}

/// Reads header and matrix from `input`, then answers each query line
/// before reading the next. `queries <q>` lines are ignored.
pub fn run_protocol<R: BufRead, W: Write>(
    args: &ChainArgs,
    input: R,
    mut output: W,
) -> CliResult<()> {
    let chain = args.chain()?;
    let cfg = args.config()?;
    let mut lines = Lines::new(input.lines());
    let header = read_header(&mut lines)?;
    chain.check_solves(header.kind.family())?;
    let n = header.matrix.n();
    let mut solver = build_solver(header.kind, &header.matrix, &chain, &cfg)?;
    let fail = |output: &mut W, msg: String| {
        let _ = writeln!(output, "error {msg}");
        let _ = output.flush();
        CliError::Protocol(msg)
    };
    loop {
        let line = match lines.next_line() {
            Ok(Some(l)) => l,
            Ok(None) => return Ok(()),
            Err(e) => return Err(fail(&mut output, e.to_string())),
        };
        if queries_line(&line).is_some() {
            continue;
        }
        let v =
            parse_values(&line, n, lines.line()).map_err(|e| fail(&mut output, e.to_string()))?;
        let answer = solver
            .query(&v)
            .map_err(|e| fail(&mut output, format!("line {}: {e}", lines.line())))?;
        writeln!(output, "{}", format_values(&answer))
            .and_then(|_| output.flush())
            .map_err(|e| CliError::Protocol(format!("cannot write answer: {e}")))?;
    }
}

pub fn cmd_protocol(args: &ProtocolArgs) -> CliResult<()> {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    run_protocol(&args.chain, stdin.lock(), stdout.lock())
}

pub const BENCH_COLUMNS: &str = "chain\tn\ttrial\tqueries\tinner_queries\tscan_length\t\
    multiset_updates\tcandidates\trmq_queries\ttotal_inner_queries\telapsed_ms";

/// One row per size and trial; counter columns are per outer query for the
/// top solver, `total_inner_queries` sums the whole solver tree.
pub fn bench_table(args: &BenchArgs) -> CliResult<String> {
    let chain = args.chain.chain()?;
    let base = args.chain.config()?;
    let family = chain
        .solves()
        .ok_or_else(|| CliError::Chain("bench needs a chain with at least one reduction".into()))?;
    let kind = kind_for(family, args.monotone.into());
    let mut table = String::from(BENCH_COLUMNS);
    table.push('\n');
    for &n in &args.sizes {
        for trial in 0..args.trials {
            let seed = mix_seed(base.seed, (n * args.trials + trial) as u64);
            let inst = gen_instance(&InstanceSpec::new(kind, n, seed))?;
            let cfg = ReductionConfig {
                seed,
                ..base.clone()
            };
            let start = Instant::now();
            let mut solver = build_solver(kind, &inst.matrix, &chain, &cfg)?;
            for q in &inst.queries {
                solver.query(q)?;
            }
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            let c = *solver.counters();
            let q = inst.queries.len().max(1) as f64;
            let per = |x: u64| x as f64 / q;
            writeln!(
                table,
                "{chain}\t{n}\t{trial}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{elapsed:.3}",
                inst.queries.len(),
                per(c.inner_queries),
                per(c.scan_length),
                per(c.multiset_updates),
                per(c.candidates_enumerated),
                per(c.rmq_queries),
                solver.report().total().inner_queries,
            )
            .expect("writing to a String");
        }
    }
    Ok(table)
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    write_output(None, &bench_table(args)?)
}

pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Protocol(a) => cmd_protocol(a),
        Command::Bench(a) => cmd_bench(a),
    }
}
