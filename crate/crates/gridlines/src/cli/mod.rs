//! Command-line surface: compute single values, emit sequence tables, run
//! the full cross-verification matrix, and benchmark the methods against
//! each other.
//!
//! Exit codes: 0 success, 1 verification or method-agreement mismatch,
//! 2 usage error, 3 resource cap exceeded. Identical invocations of
//! `compute`, `table`, and `verify` produce byte-identical output.

mod bench;
mod output;
mod verify;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::closedform::{self, GridShape};
use crate::numtheory::{build_sieve, SieveTable};
use crate::oracle;
use crate::recurrences::{self, LineKind, RecurrenceMethod};
use crate::{Error, ExactInt, Method, Quantity, Result};

use output::Row;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gridlines",
    version,
    about = "Exact counts of segments, lines, and threshold functions on rectangular grids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one value and print it in decimal.
    Compute(ComputeArgs),
    /// Emit a sequence table as CSV or JSON.
    Table(TableArgs),
    /// Run the cross-verification matrix; exits 1 on the first mismatch.
    Verify(VerifyArgs),
    /// Time the evaluation methods and emit rows with a seconds column.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Fq,
    Cq,
    Lgeq,
    Lexact,
    Threshold,
}

impl From<QuantityArg> for Quantity {
    fn from(arg: QuantityArg) -> Quantity {
        match arg {
            QuantityArg::Fq => Quantity::Fq,
            QuantityArg::Cq => Quantity::Cq,
            QuantityArg::Lgeq => Quantity::LGeq,
            QuantityArg::Lexact => Quantity::LExact,
            QuantityArg::Threshold => Quantity::Threshold,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Explicit,
    Coupled,
    Single,
    Oracle,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ComputeArgs {
    /// What to count.
    #[arg(long, value_enum)]
    quantity: QuantityArg,
    /// Gridpoint multiplicity q (≥ 1 for fq, ≥ 2 otherwise; ignored for
    /// threshold).
    #[arg(long)]
    q: Option<u64>,
    /// Grid extents, e.g. 3x3 or 2x3x4.
    #[arg(long)]
    dims: String,
    #[arg(long, value_enum, default_value = "explicit")]
    method: MethodArg,
    /// Largest gridpoint count the O(N²) oracle censuses will accept.
    #[arg(long, default_value_t = oracle::DEFAULT_PAIR_CAP)]
    pair_cap: u64,
    /// Largest n1·n2 the 2^(n1·n2) threshold oracle will accept.
    #[arg(long, default_value_t = oracle::DEFAULT_FUNC_CAP)]
    func_cap: u64,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    quantity: QuantityArg,
    #[arg(long)]
    q: Option<u64>,
    /// Inclusive range of square grid sides, e.g. 1..200.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated explicit shapes, e.g. 2x3,4x4 (explicit/oracle
    /// methods only).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "coupled")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long, default_value_t = oracle::DEFAULT_PAIR_CAP)]
    pair_cap: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_FUNC_CAP)]
    func_cap: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Grid dimensionality of the oracle comparisons (2 or 3).
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// Largest extent in the matrix (default 12 for k=2, 5 for k=3).
    #[arg(long)]
    n_max: Option<u64>,
    /// Largest q in the matrix.
    #[arg(long, default_value_t = 6)]
    q_max: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_PAIR_CAP)]
    pair_cap: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_FUNC_CAP)]
    func_cap: u64,
    /// Corrupt one recurrence value to exercise the mismatch path.
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Sequence length for the recurrence benchmark.
    #[arg(long, default_value_t = 100_000)]
    n_max: u64,
    /// Largest square side for the naive-vs-mobius comparison.
    #[arg(long, default_value_t = 5_000)]
    explicit_max: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

/// Parse arguments and run. Clap itself exits 2 on malformed flags.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => ExitCode::from(EXIT_USAGE),
                Error::Resource(_) => ExitCode::from(EXIT_RESOURCE),
            }
        }
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Compute(args) => run_compute(&args),
        Command::Table(args) => run_table(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Bench(args) => {
            let rows = bench::run(&args)?;
            let mut stdout = std::io::stdout().lock();
            match args.format {
                FormatArg::Csv => output::emit_csv(&rows, true, &mut stdout),
                FormatArg::Json => output::emit_json(&rows, &mut stdout),
            }
            .expect("write to stdout");
            Ok(ExitCode::from(EXIT_OK))
        }
    }
}

/// Validate q against the quantity's domain. Threshold ignores q.
fn resolve_q(quantity: Quantity, q: Option<u64>) -> Result<u64> {
    match quantity {
        Quantity::Threshold => Ok(0),
        Quantity::Fq => match q {
            Some(q) if q >= 1 => Ok(q),
            Some(q) => Err(Error::usage(format!("quantity fq needs q ≥ 1, got {q}"))),
            None => Err(Error::usage("quantity fq needs --q")),
        },
        Quantity::Cq | Quantity::LGeq | Quantity::LExact => match q {
            Some(q) if q >= 2 => Ok(q),
            Some(q) => Err(Error::usage(format!(
                "quantity {quantity} needs q ≥ 2, got {q}"
            ))),
            None => Err(Error::usage(format!("quantity {quantity} needs --q"))),
        },
    }
}

fn square_side(shape: &GridShape) -> Result<u64> {
    if !shape.is_square() || shape.k() != 2 {
        return Err(Error::usage(format!(
            "recurrence methods need a square 2-D grid, got {shape}"
        )));
    }
    Ok(shape.dims()[0])
}

fn threshold_extents(shape: &GridShape) -> Result<(u64, u64)> {
    if shape.k() != 2 {
        return Err(Error::usage(format!(
            "threshold counts are defined on 2-D grids, got {shape}"
        )));
    }
    Ok((shape.dims()[0], shape.dims()[1]))
}

/// Closed-form value of a quantity on an arbitrary shape.
fn eval_explicit(
    quantity: Quantity,
    q: u64,
    shape: &GridShape,
    sieve: &SieveTable,
) -> Result<ExactInt> {
    match quantity {
        Quantity::Fq => closedform::f_mobius(q, shape, sieve),
        Quantity::Cq => closedform::c_q(q, shape, Some(sieve)),
        Quantity::LGeq => closedform::l_geq(q, shape, Some(sieve)),
        Quantity::LExact => closedform::l_exact(q, shape, Some(sieve)),
        Quantity::Threshold => {
            let (n1, n2) = threshold_extents(shape)?;
            closedform::threshold_count(n1, n2, Some(sieve))
        }
    }
}

/// Census-derived value of a quantity on an arbitrary shape.
fn eval_oracle(
    quantity: Quantity,
    q: u64,
    shape: &GridShape,
    pair_cap: u64,
    func_cap: u64,
) -> Result<ExactInt> {
    match quantity {
        Quantity::Fq => {
            let census = oracle::segment_census(shape, pair_cap)?;
            Ok(census.get(&(q + 1)).cloned().unwrap_or_default() * 2u32)
        }
        Quantity::Cq => {
            let census = oracle::segment_census(shape, pair_cap)?;
            Ok(census.get(&q).cloned().unwrap_or_default())
        }
        Quantity::LGeq => {
            let census = oracle::line_census(shape, pair_cap)?;
            Ok(oracle::census_at_least(&census, q))
        }
        Quantity::LExact => {
            let census = oracle::line_census(shape, pair_cap)?;
            Ok(census.get(&q).cloned().unwrap_or_default())
        }
        Quantity::Threshold => {
            let (n1, n2) = threshold_extents(shape)?;
            oracle::threshold_census(n1, n2, func_cap)
        }
    }
}

/// Full recurrence table for a quantity over square grids up to n_max.
fn recurrence_table(
    quantity: Quantity,
    q: u64,
    n_max: u64,
    sieve: &SieveTable,
    method: RecurrenceMethod,
) -> Result<recurrences::SequenceTable> {
    match quantity {
        Quantity::Fq => match method {
            RecurrenceMethod::Coupled => recurrences::f_square_coupled(q, n_max, sieve),
            RecurrenceMethod::Single => recurrences::f_square_single(q, n_max, sieve),
        },
        Quantity::Cq => recurrences::c_square_sequence(q, n_max, sieve, method),
        Quantity::LGeq => {
            recurrences::l_square_sequence(LineKind::AtLeast, q, n_max, sieve, method)
        }
        Quantity::LExact => {
            recurrences::l_square_sequence(LineKind::Exact, q, n_max, sieve, method)
        }
        Quantity::Threshold => recurrences::threshold_sequence(n_max, sieve, method),
    }
}

fn eval_recurrence(
    quantity: Quantity,
    q: u64,
    side: u64,
    method: RecurrenceMethod,
) -> Result<ExactInt> {
    let sieve = build_sieve(side.max(1))?;
    let table = recurrence_table(quantity, q, side, &sieve, method)?;
    table
        .value_at(side)
        .cloned()
        .ok_or_else(|| Error::usage(format!("{quantity} is not defined at n = {side}")))
}

fn methods_for(arg: MethodArg, shape: &GridShape) -> Vec<Method> {
    match arg {
        MethodArg::Explicit => vec![Method::Explicit],
        MethodArg::Coupled => vec![Method::Coupled],
        MethodArg::Single => vec![Method::Single],
        MethodArg::Oracle => vec![Method::Oracle],
        MethodArg::All => {
            let mut v = vec![Method::Explicit];
            if shape.k() == 2 && shape.is_square() {
                v.push(Method::Coupled);
                v.push(Method::Single);
            }
            v.push(Method::Oracle);
            v
        }
    }
}

fn run_compute(args: &ComputeArgs) -> Result<ExitCode> {
    let shape: GridShape = args.dims.parse()?;
    let quantity = Quantity::from(args.quantity);
    let q = resolve_q(quantity, args.q)?;

    let mut computed: Vec<(Method, ExactInt)> = Vec::new();
    for method in methods_for(args.method, &shape) {
        let value = match method {
            Method::Explicit => {
                let sieve = build_sieve(shape.max_extent().max(1))?;
                eval_explicit(quantity, q, &shape, &sieve)?
            }
            Method::Oracle => eval_oracle(quantity, q, &shape, args.pair_cap, args.func_cap)?,
            Method::Coupled => eval_recurrence(quantity, q, square_side(&shape)?, RecurrenceMethod::Coupled)?,
            Method::Single => eval_recurrence(quantity, q, square_side(&shape)?, RecurrenceMethod::Single)?,
        };
        computed.push((method, value));
    }

    let first = &computed[0].1;
    if computed.iter().any(|(_, v)| v != first) {
        eprintln!("method disagreement on {quantity} q={q} dims={shape}:");
        for (m, v) in &computed {
            eprintln!("  {m} = {v}");
        }
        return Ok(ExitCode::from(EXIT_MISMATCH));
    }
    println!("{first}");
    Ok(ExitCode::from(EXIT_OK))
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::usage(format!("bad range `{s}`: expected lo..hi")))?;
    let lo: u64 = lo
        .parse()
        .map_err(|_| Error::usage(format!("bad range `{s}`: expected lo..hi")))?;
    let hi: u64 = hi
        .parse()
        .map_err(|_| Error::usage(format!("bad range `{s}`: expected lo..hi")))?;
    if lo == 0 || hi < lo {
        return Err(Error::usage(format!("bad range `{s}`: need 1 ≤ lo ≤ hi")));
    }
    Ok((lo, hi))
}

fn run_table(args: &TableArgs) -> Result<ExitCode> {
    let quantity = Quantity::from(args.quantity);
    let q = resolve_q(quantity, args.q)?;

    let rows = match (&args.n, &args.dims) {
        (Some(range), None) => table_over_range(args, quantity, q, range)?,
        (None, Some(dims)) => table_over_shapes(args, quantity, q, dims)?,
        _ => {
            return Err(Error::usage(
                "table needs exactly one of --n lo..hi or --dims A,B,…",
            ))
        }
    };

    let mut stdout = std::io::stdout().lock();
    match args.format {
        FormatArg::Csv => output::emit_csv(&rows, false, &mut stdout),
        FormatArg::Json => output::emit_json(&rows, &mut stdout),
    }
    .expect("write to stdout");

    // --method all promises agreement across methods row by row.
    let mut by_key: std::collections::BTreeMap<(u64, &str), &ExactInt> =
        std::collections::BTreeMap::new();
    for row in &rows {
        if let Some(prev) = by_key.insert((row.n, row.dims.as_str()), &row.value) {
            if prev != &row.value {
                eprintln!(
                    "method disagreement at {} q={} dims={} n={}",
                    row.quantity, row.q, row.dims, row.n
                );
                return Ok(ExitCode::from(EXIT_MISMATCH));
            }
        }
    }
    Ok(ExitCode::from(EXIT_OK))
}

fn table_over_range(
    args: &TableArgs,
    quantity: Quantity,
    q: u64,
    range: &str,
) -> Result<Vec<Row>> {
    let (lo, hi) = parse_range(range)?;
    if quantity == Quantity::Threshold && lo < 2 {
        return Err(Error::usage("threshold tables start at n = 2"));
    }
    let probe = GridShape::square(hi)?;
    let methods = methods_for(args.method, &probe);

    // (method, n) -> value, gathered per method then interleaved by n.
    let mut columns: Vec<(Method, Vec<ExactInt>)> = Vec::new();
    for method in methods {
        let mut column = Vec::with_capacity((hi - lo + 1) as usize);
        match method {
            Method::Explicit => {
                let sieve = build_sieve(hi.max(1))?;
                for n in lo..=hi {
                    let shape = GridShape::square(n)?;
                    column.push(eval_explicit(quantity, q, &shape, &sieve)?);
                }
            }
            Method::Oracle => {
                for n in lo..=hi {
                    let shape = GridShape::square(n)?;
                    column.push(eval_oracle(
                        quantity,
                        q,
                        &shape,
                        args.pair_cap,
                        args.func_cap,
                    )?);
                }
            }
            Method::Coupled | Method::Single => {
                let rmethod = if method == Method::Coupled {
                    RecurrenceMethod::Coupled
                } else {
                    RecurrenceMethod::Single
                };
                let sieve = build_sieve(hi.max(1))?;
                let table = recurrence_table(quantity, q, hi, &sieve, rmethod)?;
                for n in lo..=hi {
                    let v = table.value_at(n).cloned().ok_or_else(|| {
                        Error::usage(format!("{quantity} is not defined at n = {n}"))
                    })?;
                    column.push(v);
                }
            }
        }
        columns.push((method, column));
    }

    let mut rows = Vec::new();
    for (i, n) in (lo..=hi).enumerate() {
        for (method, column) in &columns {
            rows.push(Row {
                quantity: quantity.token(),
                q,
                dims: format!("{n}x{n}"),
                n,
                method: method.token(),
                value: column[i].clone(),
                seconds: None,
            });
        }
    }
    Ok(rows)
}

fn table_over_shapes(
    args: &TableArgs,
    quantity: Quantity,
    q: u64,
    dims: &[String],
) -> Result<Vec<Row>> {
    if dims.is_empty() {
        return Err(Error::usage("--dims needs at least one shape"));
    }
    let shapes: Vec<GridShape> = dims
        .iter()
        .map(|s| s.parse::<GridShape>())
        .collect::<Result<_>>()?;

    let methods: Vec<Method> = match args.method {
        MethodArg::Explicit => vec![Method::Explicit],
        MethodArg::Oracle => vec![Method::Oracle],
        MethodArg::All => vec![Method::Explicit, Method::Oracle],
        MethodArg::Coupled | MethodArg::Single => {
            return Err(Error::usage(
                "recurrence methods need --n lo..hi over square grids",
            ))
        }
    };

    let mut rows = Vec::new();
    for shape in &shapes {
        for &method in &methods {
            let value = match method {
                Method::Explicit => {
                    let sieve = build_sieve(shape.max_extent().max(1))?;
                    eval_explicit(quantity, q, shape, &sieve)?
                }
                Method::Oracle => {
                    eval_oracle(quantity, q, shape, args.pair_cap, args.func_cap)?
                }
                _ => unreachable!(),
            };
            rows.push(Row {
                quantity: quantity.token(),
                q,
                dims: shape.to_string(),
                // The scale column for a non-square shape is its largest
                // extent, the bound past which every count vanishes.
                n: shape.max_extent(),
                method: method.token(),
                value,
                seconds: None,
            });
        }
    }
    rows.sort_by(|a, b| a.n.cmp(&b.n).then_with(|| a.dims.cmp(&b.dims)));
    Ok(rows)
}
