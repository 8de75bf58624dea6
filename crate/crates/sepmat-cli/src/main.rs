//! `sepmat` — verify, decode, simulate, construct, search and bound
//! group-testing matrices from the command line.
//!
//! Every subcommand prints stable JSON on stdout (pretty-printed with
//! `--pretty`). Exit codes: 0 on success, 1 when `--assert` is given and the
//! verified property does not hold, 2 on usage, file or parameter errors.

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use sepmat::{
    build_2ssm, decode_dm, decode_sm_table, decode_ssm, is_bar_separable, is_disjunct, is_ssc,
    is_ssm, is_ssm_bruteforce, known_bounds, rate_bound, run_campaign, search_max, BinaryMatrix,
    BitVec, QaryCode, Sampler, SearchOptions, SearchProperty,
};

#[derive(Parser)]
#[command(name = "sepmat", version, about = "Separable-matrix toolkit for nonadaptive group testing")]
struct Cli {
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    /// d-disjunct matrix.
    Dm,
    /// d̄-separable matrix.
    Sm,
    /// strongly d-separable matrix.
    Ssm,
    /// strongly d̄-separable matrix (brute-force oracle, small n only).
    SsmBar,
    /// strongly d̄-separable q-ary code.
    Ssc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    /// Two-phase private-row identification (for SSM designs).
    Ssm,
    /// Cover decoder (for DM designs).
    Dm,
    /// Exhaustive table decoder (for SM designs).
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EmitArg {
    Matrix,
    Code,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchPropertyArg {
    Dm,
    Sm,
    Ssm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Auto,
    Matrix,
    Code,
}

#[derive(Subcommand)]
enum Command {
    /// Check a matrix (or code) property and print the report.
    Verify(VerifyArgs),
    /// Identify positives from an outcome string over a matrix.
    Decode(DecodeArgs),
    /// Run a seeded identification campaign on a matrix.
    Simulate(SimulateArgs),
    /// Build a strongly 2-separable matrix by random coding + expurgation.
    Construct(ConstructArgs),
    /// Search for the maximum column count at a fixed number of tests.
    Search(SearchArgs),
    /// Print the analytic rate bound, or the known-bounds table.
    Bounds(BoundsArgs),
    /// Convert matrix/code files between text and JSON.
    Convert(ConvertArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    property: PropertyArg,
    #[arg(long)]
    d: usize,
    /// Use the definition-level brute-force oracle (ssm/ssm-bar only).
    #[arg(long)]
    oracle: bool,
    /// Exit with code 1 when the property does not hold.
    #[arg(long)]
    assert: bool,
    /// Matrix file (code file for --property ssc).
    file: PathBuf,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value = "ssm")]
    algorithm: AlgorithmArg,
    /// Matrix file.
    file: PathBuf,
    /// Outcome: t characters over {0,1}, in row order.
    outcome: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumerate all positive sets of size <= d instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    /// Plant positive sets of exactly this size.
    #[arg(long, conflicts_with = "exhaustive")]
    size: Option<usize>,
    /// Matrix file.
    file: PathBuf,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_enum, default_value = "matrix")]
    emit: EmitArg,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    property: SearchPropertyArg,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    t: usize,
    /// Budget in elementary property sub-checks; required for t > 8.
    #[arg(long)]
    budget: Option<u64>,
    /// Warm-start matrix file accepted as a lower-bound certificate.
    #[arg(long)]
    warm_start: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Alphabet size; omit to print the known-bounds table.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 64)]
    m_cap: u32,
}

#[derive(Args)]
struct ConvertArgs {
    #[arg(long, value_enum)]
    to: FormatArg,
    #[arg(long, value_enum, default_value = "auto")]
    kind: KindArg,
    input: PathBuf,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

struct CliError(String);

impl<E: Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

/// Parses a matrix from text or JSON, keyed on the leading character.
fn load_matrix(path: &Path) -> Result<BinaryMatrix, CliError> {
    let content = read_file(path)?;
    let parsed = if content.trim_start().starts_with('{') {
        BinaryMatrix::parse_json(&content)
    } else {
        BinaryMatrix::parse_text(&content)
    };
    parsed.map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> Result<QaryCode, CliError> {
    let content = read_file(path)?;
    let parsed = if content.trim_start().starts_with('{') {
        QaryCode::parse_json(&content)
    } else {
        QaryCode::parse_text(&content)
    };
    parsed.map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn emit_json(json: &str, pretty: bool) -> Result<(), CliError> {
    if pretty {
        let value: Value = serde_json::from_str(json)?;
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!("{json}");
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, pretty: bool) -> CliResult {
    if args.oracle && !matches!(args.property, PropertyArg::Ssm | PropertyArg::SsmBar) {
        return Err(CliError(
            "--oracle applies to --property ssm or ssm-bar only".to_string(),
        ));
    }
    let report = match args.property {
        PropertyArg::Ssc => {
            let code = load_code(&args.file)?;
            is_ssc(&code, args.d)?
        }
        _ => {
            let m = load_matrix(&args.file)?;
            match args.property {
                PropertyArg::Dm => is_disjunct(&m, args.d)?,
                PropertyArg::Sm => is_bar_separable(&m, args.d)?,
                PropertyArg::Ssm if args.oracle => is_ssm_bruteforce(&m, args.d, false)?,
                PropertyArg::Ssm => is_ssm(&m, args.d)?,
                PropertyArg::SsmBar => is_ssm_bruteforce(&m, args.d, true)?,
                PropertyArg::Ssc => unreachable!(),
            }
        }
    };
    emit_json(&report.to_json(), pretty)?;
    if args.assert && !report.holds {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_decode(args: &DecodeArgs, pretty: bool) -> CliResult {
    let m = load_matrix(&args.file)?;
    let r = BitVec::parse(&args.outcome)?;
    let result = match args.algorithm {
        AlgorithmArg::Ssm => decode_ssm(&m, &r, args.d)?,
        AlgorithmArg::Dm => decode_dm(&m, &r, args.d)?,
        AlgorithmArg::Table => decode_sm_table(&m, &r, args.d)?,
    };
    emit_json(&result.to_json(), pretty)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: &SimulateArgs, pretty: bool) -> CliResult {
    let m = load_matrix(&args.file)?;
    let sampler = if args.exhaustive {
        Sampler::Exhaustive
    } else if let Some(size) = args.size {
        Sampler::FixedSize(size)
    } else {
        Sampler::Auto
    };
    let report = run_campaign(&m, args.d, args.trials, args.seed, sampler)?;
    emit_json(&serde_json::to_string(&report)?, pretty)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_construct(args: &ConstructArgs, pretty: bool) -> CliResult {
    let construction = build_2ssm(args.t, args.n, args.q, args.seed, args.d)?;
    match args.emit {
        EmitArg::Matrix => print!("{}", construction.matrix.to_text()),
        EmitArg::Code => print!("{}", construction.code.to_text()),
        EmitArg::Log => {
            let summary = serde_json::json!({
                "rows": construction.matrix.tests(),
                "columns": construction.matrix.items(),
                "rate": construction.rate(),
                "log": serde_json::from_str::<Value>(&construction.log.to_json())?,
            });
            emit_json(&summary.to_string(), pretty)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_search(args: &SearchArgs, pretty: bool) -> CliResult {
    let property = match args.property {
        SearchPropertyArg::Dm => SearchProperty::Disjunct,
        SearchPropertyArg::Sm => SearchProperty::BarSeparable,
        SearchPropertyArg::Ssm => SearchProperty::StronglySeparable,
    };
    let initial = args
        .warm_start
        .as_ref()
        .map(|path| load_matrix(path))
        .transpose()?;
    let result = search_max(
        property,
        args.d,
        args.t,
        &SearchOptions {
            budget: args.budget,
            initial,
        },
    )?;
    emit_json(&result.to_json(), pretty)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(args: &BoundsArgs, pretty: bool) -> CliResult {
    let json = match args.q {
        Some(q) => rate_bound(q, args.m_cap)?.to_json(),
        None => known_bounds().to_json(),
    };
    emit_json(&json, pretty)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_convert(args: &ConvertArgs) -> CliResult {
    let content = read_file(&args.input)?;
    let is_json = content.trim_start().starts_with('{');
    let kind = match args.kind {
        KindArg::Matrix => KindArg::Matrix,
        KindArg::Code => KindArg::Code,
        KindArg::Auto => {
            if is_json {
                let value: Value = serde_json::from_str(&content)
                    .map_err(|e| CliError(format!("{}: {e}", args.input.display())))?;
                if value.get("q").is_some() {
                    KindArg::Code
                } else {
                    KindArg::Matrix
                }
            } else {
                let header_fields = content.lines().next().unwrap_or("").split(' ').count();
                match header_fields {
                    2 => KindArg::Matrix,
                    3 => KindArg::Code,
                    _ => {
                        return Err(CliError(format!(
                            "{}: cannot infer file kind from header",
                            args.input.display()
                        )))
                    }
                }
            }
        }
    };
    let rendered = match kind {
        KindArg::Matrix => {
            let m = if is_json {
                BinaryMatrix::parse_json(&content)
            } else {
                BinaryMatrix::parse_text(&content)
            }
            .map_err(|e| CliError(format!("{}: {e}", args.input.display())))?;
            match args.to {
                FormatArg::Text => m.to_text(),
                FormatArg::Json => m.to_json() + "\n",
            }
        }
        KindArg::Code => {
            let c = if is_json {
                QaryCode::parse_json(&content)
            } else {
                QaryCode::parse_text(&content)
            }
            .map_err(|e| CliError(format!("{}: {e}", args.input.display())))?;
            match args.to {
                FormatArg::Text => c.to_text(),
                FormatArg::Json => c.to_json() + "\n",
            }
        }
        KindArg::Auto => unreachable!(),
    };
    match &args.output {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| CliError(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{rendered}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> CliResult {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError(format!("cannot configure {threads} threads: {e}")))?;
    }
    match &cli.command {
        Command::Verify(args) => cmd_verify(args, cli.pretty),
        Command::Decode(args) => cmd_decode(args, cli.pretty),
        Command::Simulate(args) => cmd_simulate(args, cli.pretty),
        Command::Construct(args) => cmd_construct(args, cli.pretty),
        Command::Search(args) => cmd_search(args, cli.pretty),
        Command::Bounds(args) => cmd_bounds(args, cli.pretty),
        Command::Convert(args) => cmd_convert(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
