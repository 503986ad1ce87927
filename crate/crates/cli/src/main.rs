mod render;

use std::fs::File;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use moncurve::family::{predict, verify_one, FamilyParams, RowOutcome, VerifyOptions};
use moncurve::ideal::{
    colon, default_degree_bound, ideal_equal, ideal_member, intersect, is_primary, saturate,
};
use moncurve::invariants::classify_with_bound;
use moncurve::{verify_family, CurveSpec, Monomial, MonomialIdeal};

#[derive(Parser, Debug)]
#[command(
    name = "moncurve",
    version,
    about = "Invariants of projective monomial curves"
)]
struct Cli {
    /// Worker threads for sweeps; MONCURVE_JOBS takes precedence.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Full invariant report for one curve.
    Analyze {
        /// Curve as `d:g1,g2,...`, including 0 and d.
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        output: Output,
        /// Degree bound for the analysis (defaults to d).
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Prediction against computation for `M_r^n`; ranges run a sweep.
    Family {
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: String,
        #[command(flatten)]
        output: Output,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Sweep `M_r^n` over ranges and write CSV.
    Sweep {
        #[arg(long)]
        r: String,
        #[arg(long)]
        n: String,
        /// CSV destination; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Raw monomial-ideal operations.
    Ideal {
        #[arg(value_enum)]
        op: IdealOp,
        /// Ideal as `curve|A,B;A,B`; repeat for binary operations.
        #[arg(long = "ideal", required = true)]
        ideals: Vec<String>,
        /// The monomial to divide by, as `A,B`.
        #[arg(long)]
        by: Option<String>,
        /// The monomial to test, as `A,B`.
        #[arg(long)]
        monomial: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum IdealOp {
    Member,
    Colon,
    Saturate,
    Intersect,
    Equal,
    Primary,
}

/// Exit status with the message to print.
enum Failure {
    User(String),
    Internal(String),
}

impl From<moncurve::Error> for Failure {
    fn from(e: moncurve::Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::User(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::User(format!("csv error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn jobs(flag: Option<u32>) -> Result<Option<usize>, Failure> {
    match std::env::var("MONCURVE_JOBS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Failure::User(format!(
                "MONCURVE_JOBS must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(flag.map(|n| n as usize)),
    }
}

fn run(cli: Cli) -> CmdResult {
    let jobs = jobs(cli.jobs)?;
    match cli.command {
        Command::Analyze {
            curve,
            output,
            bound,
        } => cmd_analyze(&curve, &output, bound),
        Command::Family {
            r,
            n,
            output,
            bound,
        } => cmd_family(&r, &n, &output, bound, jobs),
        Command::Sweep { r, n, out, bound } => cmd_sweep(
            parse_range("r", &r)?,
            parse_range("n", &n)?,
            out,
            bound,
            jobs,
        ),
        Command::Ideal {
            op,
            ideals,
            by,
            monomial,
            bound,
            output,
        } => cmd_ideal(
            op,
            &ideals,
            by.as_deref(),
            monomial.as_deref(),
            bound,
            &output,
        ),
    }
}

/// `a:b` or a single integer.
fn parse_range(name: &str, text: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || {
        Failure::User(format!(
            "malformed {name} range `{text}`, expected `a:b` or `a`"
        ))
    };
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| bad());
    match text.split_once(':') {
        Some((a, b)) => Ok(parse(a)?..=parse(b)?),
        None => {
            let x = parse(text)?;
            Ok(x..=x)
        }
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(
            File::create(path)
                .map_err(|e| Failure::User(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    })
}

fn cmd_analyze(text: &str, output: &Output, bound: Option<u32>) -> CmdResult {
    let curve: CurveSpec = text.parse()?;
    let report = classify_with_bound(&curve, bound.unwrap_or(curve.degree()))?;
    let mut w = sink(&output.out)?;
    match output.format {
        Format::Table => render::report_table(&mut w, &report)?,
        Format::Json => render::json_line(&mut w, &report)?,
        Format::Csv => render::report_csv(&mut w, &report)?,
    }
    w.flush()?;
    let bad = report.mismatches();
    if !bad.is_empty() {
        return Err(Failure::Internal(bad.join("; ")));
    }
    Ok(())
}

fn cmd_family(
    r: &str,
    n: &str,
    output: &Output,
    bound: Option<u32>,
    jobs: Option<usize>,
) -> CmdResult {
    let (rr, nr) = (parse_range("r", r)?, parse_range("n", n)?);
    if rr.start() != rr.end() || nr.start() != nr.end() {
        return cmd_sweep(rr, nr, output.out.clone(), bound, jobs);
    }
    let params = FamilyParams::new(*rr.start(), *nr.start())?;
    let prediction = predict(params.r as i64, params.n as i64)?;
    let row = verify_one(params, &VerifyOptions { jobs: None, bound });
    let mut w = sink(&output.out)?;
    match output.format {
        Format::Table => render::family_table(&mut w, &row, &prediction)?,
        Format::Json => render::json_line(&mut w, &render::FamilyJson::new(&row, &prediction))?,
        Format::Csv => render::rows_csv(&mut w, std::slice::from_ref(&row))?,
    }
    w.flush()?;
    match &row.outcome {
        RowOutcome::Match => Ok(()),
        RowOutcome::Mismatch(fields) => Err(Failure::Internal(format!(
            "prediction mismatch in {}",
            fields.join(", ")
        ))),
        RowOutcome::Error(msg) => Err(Failure::Internal(msg.clone())),
    }
}

fn cmd_sweep(
    r: RangeInclusive<i64>,
    n: RangeInclusive<i64>,
    out: Option<PathBuf>,
    bound: Option<u32>,
    jobs: Option<usize>,
) -> CmdResult {
    let rows = verify_family(r, n, &VerifyOptions { jobs, bound })?;
    let mut w = sink(&out)?;
    render::rows_csv(&mut w, &rows)?;
    w.flush()?;
    drop(w);
    let summary = render::Summary::of(&rows);
    println!("{summary}");
    if summary.mismatches + summary.errors > 0 {
        return Err(Failure::Internal(format!(
            "{} mismatching and {} failed rows",
            summary.mismatches, summary.errors
        )));
    }
    Ok(())
}

fn parse_monomial(flag: &str, text: Option<&str>) -> Result<Monomial, Failure> {
    let text = text.ok_or_else(|| Failure::User(format!("--{flag} is required")))?;
    Ok(text.parse()?)
}

fn cmd_ideal(
    op: IdealOp,
    texts: &[String],
    by: Option<&str>,
    monomial: Option<&str>,
    bound: Option<u32>,
    output: &Output,
) -> CmdResult {
    let ideals: Vec<MonomialIdeal> = texts
        .iter()
        .map(|t| t.parse::<MonomialIdeal>())
        .collect::<Result<_, _>>()?;
    let binary = matches!(op, IdealOp::Intersect | IdealOp::Equal);
    let want = if binary { 2 } else { 1 };
    if ideals.len() != want {
        return Err(Failure::User(format!(
            "{op:?} takes {want} --ideal argument(s), got {}",
            ideals.len()
        )));
    }
    let first = &ideals[0];
    let bound = bound.unwrap_or_else(|| {
        ideals
            .iter()
            .map(|i| default_degree_bound(i.curve()).max(i.max_generator_degree()))
            .max()
            .unwrap()
    });
    let mut w = sink(&output.out)?;
    match op {
        IdealOp::Member => {
            let m = parse_monomial("monomial", monomial)?;
            let member = ideal_member(first, &m)?;
            render::member(&mut w, output.format == Format::Json, &m, member)?;
        }
        IdealOp::Colon | IdealOp::Saturate | IdealOp::Intersect => {
            let result = match op {
                IdealOp::Colon => colon(first, &parse_monomial("by", by)?, bound)?,
                IdealOp::Saturate => saturate(first, &parse_monomial("by", by)?, bound)?,
                _ => intersect(first, &ideals[1], bound)?,
            };
            render::ideal(&mut w, output.format == Format::Json, &result, bound)?;
        }
        IdealOp::Equal | IdealOp::Primary => {
            let verdict = match op {
                IdealOp::Equal => ideal_equal(first, &ideals[1], bound)?,
                _ => is_primary(first, bound)?,
            };
            render::verdict(&mut w, output.format == Format::Json, &verdict)?;
        }
    }
    w.flush()?;
    Ok(())
}
